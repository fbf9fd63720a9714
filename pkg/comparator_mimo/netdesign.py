"""
Comparator network design for a known channel.

Both searches evaluate candidate networks under the linearized model of the
LRA-LMMSE detector. Because the arcsine law and the Bussgang normalization
act element-wise and row-wise, the quantized correlation of any partial
network is a principal submatrix of the one of the fully connected network.
The full matrices are therefore built once per channel and each candidate
costs a single small factorization.
"""

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np
from loguru import logger

from comparator_mimo.detector import lmmse_detector, linear_model_moments, symbol_mse
from comparator_mimo.domain.system import ComparatorNetwork, SystemConfig
from comparator_mimo.exceptions import InvalidInputError
from comparator_mimo.model import all_pairs, build_b, build_b_prime, fully_connected_network
from comparator_mimo.utils import solve_symmetric


@dataclass(frozen=True)
class StreamMetrics:
    """Per-stream MSE and the virtual-channel SINR table."""

    mse_per_stream: np.ndarray
    sinr_table: np.ndarray


@dataclass
class SearchTrace:
    """Outcome of a network search with its objective history."""

    network: ComparatorNetwork
    objective: List[float] = field(default_factory=list)
    n_evaluations: int = 0


def virtual_sinr(h_real: np.ndarray, b_prime: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    """SINR of every comparator output l with respect to every real stream k."""
    power = np.abs(b_prime @ h_real) ** 2
    interference = power.sum(axis=1, keepdims=True) - power
    return 0.5 * cfg.sigma_x2 * power / (0.5 * cfg.sigma_x2 * interference + cfg.sigma_n2)


def per_stream_mse(h_real: np.ndarray, b: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    """Per-stream linear-model MSE of the LRA-LMMSE detector for B."""
    g = lmmse_detector(h_real, b, cfg).g
    return symbol_mse(g, linear_model_moments(h_real, b, cfg))


def stream_metrics(h_real: np.ndarray, b: np.ndarray, cfg: SystemConfig) -> StreamMetrics:
    """Per-stream MSE for B together with the fully connected SINR table."""
    b_prime_full = build_b_prime(fully_connected_network(cfg.n_antennas))
    return StreamMetrics(
        mse_per_stream=per_stream_mse(h_real, b, cfg),
        sinr_table=virtual_sinr(h_real, b_prime_full, cfg),
    )


class CandidateEvaluator:
    """Linear-model MSE of networks drawn from the fully connected candidate set."""

    def __init__(self, h_real: np.ndarray, cfg: SystemConfig):
        self.cfg = cfg
        self.candidates = all_pairs(cfg.n_antennas)
        self.n_inputs = 2 * cfg.n_antennas
        moments = linear_model_moments(
            h_real, build_b(fully_connected_network(cfg.n_antennas)), cfg
        )
        self._c_zq = moments.c_zq
        self._c_zqx = moments.c_zqx
        self._prior = np.diag(moments.c_x).copy()
        self.n_evaluations = 0

    def _rows(self, chosen: Sequence[int]) -> np.ndarray:
        return np.concatenate(
            [np.arange(self.n_inputs), self.n_inputs + np.asarray(chosen, dtype=int)]
        )

    def per_stream(self, chosen: Sequence[int]) -> np.ndarray:
        """diag(C_x - C_zQx^T C_zQ^-1 C_zQx) restricted to the chosen comparators."""
        self.n_evaluations += 1
        rows = self._rows(chosen)
        c_zqx = self._c_zqx[rows]
        solved = solve_symmetric(self._c_zq[np.ix_(rows, rows)], c_zqx)
        return self._prior - np.einsum("ik,ik->k", c_zqx, solved)

    def total(self, chosen: Sequence[int]) -> float:
        return float(np.sum(self.per_stream(chosen)))

    def network(self, chosen: Sequence[int]) -> ComparatorNetwork:
        return ComparatorNetwork(
            n_antennas=self.cfg.n_antennas,
            pairs=tuple(self.candidates[c] for c in chosen),
        )


def _check_alpha(alpha_p: int, cfg: SystemConfig) -> None:
    if alpha_p < 0 or alpha_p > cfg.alpha_full:
        raise InvalidInputError(f"alpha_p={alpha_p} outside [0, {cfg.alpha_full}]")


def greedy_mse_search_traced(
    h_real: np.ndarray, alpha_p: int, cfg: SystemConfig
) -> SearchTrace:
    """
    Greedy MSE search.

    Starts from the first ``alpha_p`` lexicographic pairs. Each comparator
    slot in turn is offered every candidate not already in the network, and
    a candidate replaces the incumbent as soon as it strictly lowers the
    total MSE; the scan then continues against the updated network.
    """
    _check_alpha(alpha_p, cfg)
    evaluator = CandidateEvaluator(h_real, cfg)
    chosen = list(range(alpha_p))
    l_min = evaluator.total(chosen)
    trace = SearchTrace(network=evaluator.network(chosen), objective=[l_min])

    for i in range(alpha_p):
        for j in range(len(evaluator.candidates)):
            if j in chosen:
                continue
            trial = chosen.copy()
            trial[i] = j
            l = evaluator.total(trial)
            if l < l_min:
                l_min = l
                chosen = trial
                trace.objective.append(l)

    trace.network = evaluator.network(chosen)
    trace.n_evaluations = evaluator.n_evaluations
    logger.debug(
        f"Greedy search: alpha_p={alpha_p}, {len(trace.objective) - 1} swaps, "
        f"MSE {trace.objective[0]:.5f} -> {l_min:.5f}"
    )
    return trace


def greedy_mse_search(h_real: np.ndarray, alpha_p: int, cfg: SystemConfig) -> ComparatorNetwork:
    """Network chosen by greedy_mse_search_traced."""
    return greedy_mse_search_traced(h_real, alpha_p, cfg).network


def sequential_sinr_search_traced(
    h_real: np.ndarray, alpha_p: int, cfg: SystemConfig
) -> SearchTrace:
    """
    Sequential SINR search.

    Starting without comparators, each step finds the stream with the largest
    MSE and appends the unused comparator with the highest virtual SINR for
    that stream. Ties go to the lowest index.
    """
    _check_alpha(alpha_p, cfg)
    evaluator = CandidateEvaluator(h_real, cfg)
    sinr = virtual_sinr(
        h_real, build_b_prime(fully_connected_network(cfg.n_antennas)), cfg
    )
    remaining = np.ones(len(evaluator.candidates), dtype=bool)
    chosen: List[int] = []
    trace = SearchTrace(network=evaluator.network(chosen))

    for _ in range(alpha_p):
        mse = evaluator.per_stream(chosen)
        trace.objective.append(float(np.max(mse)))
        k_max = int(np.argmax(mse))
        scores = np.where(remaining, sinr[:, k_max], -np.inf)
        l_max = int(np.argmax(scores))
        chosen.append(l_max)
        remaining[l_max] = False

    trace.network = evaluator.network(chosen)
    trace.n_evaluations = evaluator.n_evaluations
    return trace


def sequential_sinr_search(
    h_real: np.ndarray, alpha_p: int, cfg: SystemConfig
) -> ComparatorNetwork:
    """Network chosen by sequential_sinr_search_traced."""
    return sequential_sinr_search_traced(h_real, alpha_p, cfg).network
