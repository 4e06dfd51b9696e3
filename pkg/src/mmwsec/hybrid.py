"""Constrained RF dictionary and orthogonal-matching-pursuit factorization.

The RF columns are steering vectors on the quantized phase grid
theta_l in {0, 2pi/L, ..., 2pi(L-1)/L}, L = 2^phase_bits, optionally
augmented with antenna-group on/off switching: groups of N_g contiguous
antennas are kept or zeroed, every non-empty combination of the
N_T/N_g groups forming one mask, for (2^(N_T/N_g) - 1) * L columns in
angle-major, mask-minor order. Masked columns keep unit-modulus entries on
the active antennas and are not renormalized (switches remove elements, the
baseband weight absorbs scale), so OMP correlations are norm-compensated.

Any target precoder is factorized as F_RF f_BB by greedy column selection
with a full least-squares refit each iteration, then rescaled to the unit
transmit-power constraint ||F_RF f_BB|| = 1.

A superset dictionary does not provably dominate at equal sparsity (greedy
selection is path-dependent); in practice it does at the configurations used
here, and the property is asserted by the acceptance suite at its stated
operating point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import ArrayConfig, steering_matrix


class DictionaryOverflowError(ValueError):
    pass


@dataclass(frozen=True)
class RfDictionary:
    """Candidate RF columns plus the bookkeeping to trace each column back to
    its quantized angle and group mask."""

    columns: np.ndarray          # n_antennas x n_columns, complex
    angles: np.ndarray           # quantized angle per column
    mask_bits: np.ndarray        # group on/off bitmask per column (full mask when off)
    n_quantized_angles: int      # L = 2^phase_bits
    group_size: int
    switching: bool

    @property
    def n_columns(self) -> int:
        return self.columns.shape[1]

    @property
    def column_norms(self) -> np.ndarray:
        return np.linalg.norm(self.columns, axis=0)


def group_masks(n_antennas: int, group_size: int) -> np.ndarray:
    """All 2^(N_T/N_g) - 1 non-empty group on/off masks, one row each."""
    n_groups = n_antennas // group_size
    masks = np.empty((2**n_groups - 1, n_antennas))
    for m in range(1, 2**n_groups):
        bits = [(m >> g) & 1 for g in range(n_groups)]
        masks[m - 1] = np.repeat(bits, group_size)
    return masks


def build_dictionary(
    cfg: ArrayConfig,
    switching: bool = True,
    column_cap: int = 1_000_000,
    group_permutation: np.ndarray | None = None,
) -> RfDictionary:
    """Quantized-angle steering dictionary, optionally switch-augmented.

    Groups are contiguous index blocks by default; pass group_permutation (a
    permutation of antenna indices) for randomized group membership.
    """
    n_angles = 2**cfg.phase_bits
    n_groups = cfg.n_groups
    n_masks = 2**n_groups - 1 if switching else 1
    if n_angles * n_masks > column_cap:
        raise DictionaryOverflowError(
            f"dictionary would hold {n_angles * n_masks} columns (cap {column_cap}); "
            f"increase group_size or lower phase_bits"
        )

    quantized = np.arange(n_angles) * (2.0 * np.pi / n_angles)
    base = steering_matrix(cfg, quantized)  # n_antennas x L

    if not switching:
        full = 2**n_groups - 1
        return RfDictionary(
            columns=base,
            angles=quantized,
            mask_bits=np.full(n_angles, full, dtype=np.int64),
            n_quantized_angles=n_angles,
            group_size=cfg.group_size,
            switching=False,
        )

    masks = group_masks(cfg.n_antennas, cfg.group_size)
    if group_permutation is not None:
        masks = masks[:, np.argsort(group_permutation)]
    # angle-major, mask-minor ordering
    columns = (base[:, :, None] * masks.T[:, None, :]).reshape(cfg.n_antennas, -1)
    angles = np.repeat(quantized, n_masks)
    bits = np.tile(np.arange(1, 2**n_groups, dtype=np.int64), n_angles)
    return RfDictionary(
        columns=columns,
        angles=angles,
        mask_bits=bits,
        n_quantized_angles=n_angles,
        group_size=cfg.group_size,
        switching=True,
    )


@dataclass(frozen=True)
class HybridPrecoder:
    """F_RF (dictionary columns), baseband weights, their product, and the
    approximation residual before the unit-power rescale."""

    rf_matrix: np.ndarray
    baseband: np.ndarray
    reconstructed: np.ndarray
    residual_norm: float
    selected: tuple[int, ...]
    collision: bool  # a repeated column topped the correlation scan and was skipped


def omp_factorize(target: np.ndarray, dictionary: RfDictionary, n_rf: int) -> HybridPrecoder:
    """Greedy factorization of target into n_rf dictionary columns.

    Each iteration picks the column maximizing |column^H residual|/||column||,
    refits all selected columns by least squares, and updates the residual.
    A column that would repeat is skipped for the next best (flagged).
    """
    if n_rf < 1:
        raise ValueError(f"n_rf must be >= 1, got {n_rf}")
    if dictionary.n_columns == 0:
        raise ValueError("empty dictionary")
    n_rf = min(n_rf, dictionary.n_columns)

    cols = dictionary.columns
    norms = dictionary.column_norms
    selected: list[int] = []
    collision = False
    residual = target.astype(complex)
    weights = np.zeros(0, dtype=complex)

    for _ in range(n_rf):
        corr = np.abs(cols.conj().T @ residual) / norms
        best = int(np.argmax(corr))
        if best in selected:
            collision = True
            corr[selected] = -1.0
            best = int(np.argmax(corr))
        selected.append(best)
        basis = cols[:, selected]
        weights, *_ = np.linalg.lstsq(basis, target, rcond=None)
        residual = target - basis @ weights

    basis = cols[:, selected]
    residual_norm = float(np.linalg.norm(residual))
    scale = np.linalg.norm(basis @ weights)
    baseband = weights / scale
    reconstructed = basis @ baseband
    return HybridPrecoder(
        rf_matrix=basis,
        baseband=baseband,
        reconstructed=reconstructed,
        residual_norm=residual_norm,
        selected=tuple(selected),
        collision=collision,
    )


def split_rf_budget(n_rf: int, epsilon: float) -> tuple[int, int]:
    """Split the total RF-chain budget between the data and noise beams:
    half each (data rounded down), all to one side at the eps extremes."""
    if n_rf < 2 and 0.0 < epsilon < 1.0:
        raise ValueError("need at least 2 RF chains to carry both beams")
    if epsilon >= 1.0:
        return n_rf, 0
    if epsilon <= 0.0:
        return 0, n_rf
    n_s = max(1, n_rf // 2)
    return n_s, n_rf - n_s


def factorize_components(
    f_s: np.ndarray,
    f_n: np.ndarray,
    epsilon: float,
    dictionary: RfDictionary,
    n_rf: int,
    split: tuple[int, int] | None = None,
) -> tuple[HybridPrecoder | None, HybridPrecoder | None]:
    """Factorize the data and noise beams separately over a shared dictionary
    so the per-symbol noise phase can be applied digitally without re-running
    the pursuit. n_rf is the total budget; see split_rf_budget.
    """
    if abs(np.vdot(f_s, f_n)) > 1e-8:
        raise ValueError("f_s and f_n are not orthogonal")
    n_s, n_n = split if split is not None else split_rf_budget(n_rf, epsilon)
    hp_s = omp_factorize(f_s, dictionary, n_s) if n_s > 0 else None
    hp_n = omp_factorize(f_n, dictionary, n_n) if n_n > 0 else None
    return hp_s, hp_n


def hybrid_symbol(
    hp_s: HybridPrecoder | None,
    hp_n: HybridPrecoder | None,
    epsilon: float,
    noise_phase: float,
) -> np.ndarray:
    """Per-symbol hybrid precoder sqrt(eps) f_s~ + sqrt(1-eps) e^{j phase} f_n~,
    renormalized to unit transmit power (the factorized parts are not exactly
    orthogonal)."""
    parts = []
    if epsilon > 0.0:
        parts.append(np.sqrt(epsilon) * hp_s.reconstructed)
    if epsilon < 1.0:
        parts.append(np.sqrt(1.0 - epsilon) * np.exp(1j * noise_phase) * hp_n.reconstructed)
    vec = parts[0] if len(parts) == 1 else parts[0] + parts[1]
    return vec / np.linalg.norm(vec)
