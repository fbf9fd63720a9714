"""
Seeded Monte Carlo sweeps over the SNR grid of a scenario.

Trial ``t`` at SNR index ``s`` draws its channel from stream ``(t, 0)`` and
its noise from stream ``(t, s + 1)``, so every SNR point sees the same
channels and the result does not depend on how trials are scheduled.
Reductions run in trial order over exact integers (bit errors) or with
compensated sums (everything else).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence

from loguru import logger

from comparator_mimo.config import DEFAULT_THREADS, MAX_SKIP_FRACTION
from comparator_mimo.domain.scenario import Metric, Scenario, SweepReport, SweepRow
from comparator_mimo.exceptions import InvalidInputError, SingularCovarianceError, SweepFailure
from comparator_mimo.power import power_table
from comparator_mimo.receiver import ReceiverChain, TrialRecord
from comparator_mimo.utils import summarize, trial_generator


def _run_trials(
    trial: Callable[[int], Optional[TrialRecord]], n_trials: int, threads: int
) -> List[Optional[TrialRecord]]:
    if threads == 1:
        return [trial(t) for t in range(n_trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(trial, range(n_trials)))


def _power_rows(scenario: Scenario, scenario_hash: str) -> List[SweepRow]:
    rows = []
    for entry in power_table(scenario.n_antennas, scenario.power_alpha, scenario.power_q_bits):
        if entry.q_bits is not None:
            label = f"power_q{entry.q_bits}"
        elif entry.alpha is not None:
            label = f"power_cn_alpha{entry.alpha}"
        else:
            label = "power_one_bit"
        rows.append(
            SweepRow(
                snr_db=None,
                metric=label,
                value=entry.milliwatts,
                stderr=0.0,
                n_trials=1,
                seed=scenario.master_seed,
                scenario_hash=scenario_hash,
            )
        )
    return rows


def aggregate(
    scenario: Scenario,
    snr_db: float,
    records: Sequence[TrialRecord],
    scenario_hash: str,
) -> List[SweepRow]:
    """Reduce the records of one SNR point to report rows."""
    metric = scenario.metric
    spread = summarize([r.channel_value for r in records])

    if metric == Metric.BER:
        bit_errors = sum(r.bit_errors for r in records)
        n_bits = sum(r.n_bits for r in records)
        value = bit_errors / n_bits if n_bits else math.nan
    else:
        samples = [v for r in records for v in r.values]
        value = math.fsum(samples) / len(samples) if samples else math.nan

    row = dict(
        snr_db=snr_db,
        n_trials=len(records),
        seed=scenario.master_seed,
        scenario_hash=scenario_hash,
    )
    rows = [SweepRow(metric=metric.value, value=value, stderr=spread.stderr, **row)]

    analytic = [r.analytic for r in records if r.analytic is not None]
    if metric == Metric.MSE and analytic:
        analytic_summary = summarize(analytic)
        rows.append(
            SweepRow(
                metric="mse_analytic",
                value=analytic_summary.mean,
                stderr=analytic_summary.stderr,
                **row,
            )
        )
    return rows


def run_sweep(scenario: Scenario, threads: int = DEFAULT_THREADS) -> SweepReport:
    """
    Run every SNR point of the scenario.

    A trial whose covariance cannot be factorized is skipped and counted.

    Raises:
        SweepFailure: if more than 1% of the trials of an SNR point are skipped
        InvalidInputError: if ``threads`` is below 1
    """
    if threads < 1:
        raise InvalidInputError(f"threads must be at least 1, got {threads}")
    scenario_hash = scenario.scenario_hash()
    report = SweepReport(scenario_hash=scenario_hash)

    if scenario.metric == Metric.POWER:
        report.rows.extend(_power_rows(scenario, scenario_hash))
        logger.info(f"{scenario.name}: power table with {len(report.rows)} rows")
        return report

    chain = ReceiverChain(scenario)
    seed = scenario.master_seed
    n_channels = scenario.n_channels

    for s, snr_db in enumerate(scenario.snr_grid_db):

        def trial(t: int, s: int = s, snr_db: float = snr_db) -> Optional[TrialRecord]:
            try:
                return chain.run_channel(
                    snr_db,
                    trial_generator(seed, t, 0),
                    trial_generator(seed, t, s + 1),
                    scenario.n_noise,
                )
            except SingularCovarianceError as e:
                logger.warning(f"Skipping trial {t} at {snr_db} dB: {e}")
                return None

        outcomes = _run_trials(trial, n_channels, threads)
        records = [r for r in outcomes if r is not None]
        skipped = n_channels - len(records)
        report.skipped_trials += skipped
        if skipped > MAX_SKIP_FRACTION * n_channels:
            logger.error(
                f"{scenario.name}: {skipped} of {n_channels} trials skipped at {snr_db} dB"
            )
            raise SweepFailure(
                f"{skipped} of {n_channels} trials skipped at {snr_db} dB "
                f"(limit {MAX_SKIP_FRACTION:.0%})"
            )

        rows = aggregate(scenario, snr_db, records, scenario_hash)
        report.rows.extend(rows)
        logger.info(
            f"{scenario.name}: {snr_db:g} dB, {len(records)} channels x "
            f"{scenario.n_noise}, {skipped} skipped, {rows[0].metric}={rows[0].value:.6g}"
        )

    return report
