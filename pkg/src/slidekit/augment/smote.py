"""Offline minority oversampling guided by structural similarity.

For each minority image the k most similar images (highest SSIM, i.e.
lowest 1-SSIM distance) form its neighbor pool; synthetics interpolate
between the anchor and a randomly drawn neighbor with a Beta-distributed
weight clipped away from 0 and 1, so no synthetic duplicates a parent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ..core.image import MultiBandImage, require_same_shape
from ..core.rng import RngState
from ..core.ssim import ssim_matrix
from ..errors import InsufficientDataError, UsageError


@dataclass(frozen=True)
class SmoteConfig:
    k_neighbors: int = 5
    n_syn: int = 1  # synthetics per anchor
    clip_lo: float = 0.1
    clip_hi: float = 0.9
    beta_alpha: float = 2.0
    beta_beta: float = 2.0
    # optional cap on the neighbor-search pool; None = exact all-pairs
    candidate_cap: int | None = None

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise UsageError(f"k_neighbors must be positive, got {self.k_neighbors}")
        if self.n_syn < 1:
            raise UsageError(f"n_syn must be positive, got {self.n_syn}")
        if not 0.0 <= self.clip_lo < self.clip_hi <= 1.0:
            raise UsageError(
                f"clip bounds must satisfy 0 <= lo < hi <= 1, got [{self.clip_lo}, {self.clip_hi}]"
            )
        if self.beta_alpha <= 0 or self.beta_beta <= 0:
            raise UsageError("beta parameters must be positive")
        if self.candidate_cap is not None and self.candidate_cap < self.k_neighbors:
            raise UsageError("candidate_cap must be at least k_neighbors")


class SyntheticRecord(NamedTuple):
    image: MultiBandImage
    anchor: int  # index into the minority sequence
    neighbor: int
    lam: float


def blend(anchor: MultiBandImage, neighbor: MultiBandImage, lam: float) -> MultiBandImage:
    """lam*anchor + (1-lam)*neighbor, computed so pixels never leave the parent interval."""
    require_same_shape(anchor, neighbor)
    if not 0.0 <= lam <= 1.0:
        raise UsageError(f"interpolation weight must lie in [0, 1], got {lam}")
    if lam == 1.0:
        return anchor
    if lam == 0.0:
        return neighbor
    out = neighbor.data + lam * (anchor.data - neighbor.data)
    return MultiBandImage.wrap(out)


def smote_ssim_detailed(
    minority: Sequence[MultiBandImage], cfg: SmoteConfig, rng: RngState
) -> list[SyntheticRecord]:
    """Full provenance variant: each synthetic keeps its parents and weight."""
    minority = list(minority)
    n = len(minority)
    if n <= cfg.k_neighbors:
        raise InsufficientDataError(
            f"need more than k_neighbors={cfg.k_neighbors} minority samples, got {n}"
        )
    for img in minority[1:]:
        require_same_shape(minority[0], img)

    sim = ssim_matrix(minority)
    records: list[SyntheticRecord] = []
    for i in range(n):
        r = rng.child(i)
        pool = np.delete(np.arange(n), i)
        if cfg.candidate_cap is not None and pool.size > cfg.candidate_cap:
            pool = pool[np.sort(r.permutation(pool.size)[: cfg.candidate_cap])]
        # k highest-SSIM candidates; ties broken by lower index for determinism
        order = np.lexsort((pool, -sim[i, pool]))
        neighbors = pool[order[: cfg.k_neighbors]]
        for _ in range(cfg.n_syn):
            j = int(neighbors[int(r.integers(0, neighbors.size))])
            lam = float(np.clip(r.beta(cfg.beta_alpha, cfg.beta_beta), cfg.clip_lo, cfg.clip_hi))
            records.append(SyntheticRecord(blend(minority[i], minority[j], lam), i, j, lam))
    return records


def smote_ssim(
    minority: Sequence[MultiBandImage], cfg: SmoteConfig, rng: RngState
) -> list[MultiBandImage]:
    """Synthetic minority images, len(minority) * n_syn of them."""
    return [rec.image for rec in smote_ssim_detailed(minority, cfg, rng)]
