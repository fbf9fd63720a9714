"""
Scenario files and sweep CSV output.

A scenario file holds one ``key = value`` pair per line. ``#`` starts a
comment. List values are comma separated or written as an inclusive range
``start:stop:step``. Keys are the Scenario field names, with ``lambda`` for
the outdated-channel reliability.

    name = ber_4x16_greedy
    n_users = 4
    n_antennas = 16
    network_mode = greedy
    alpha_p = 32
    metric = ber
    snr_grid_db = -10:30:5
"""

import csv
import io
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO, Tuple, Union

from pydantic import ValidationError

from comparator_mimo.domain.scenario import Scenario, SweepReport
from comparator_mimo.exceptions import ComparatorMimoError, ScenarioParseError

CSV_COLUMNS = ("snr_db", "metric", "value", "stderr", "n_trials", "seed", "scenario_hash")
LIST_KEYS = {"snr_grid_db", "power_q_bits"}


def _scenario_keys() -> Dict[str, str]:
    """File key -> model field name."""
    keys = {}
    for name, info in Scenario.model_fields.items():
        keys[info.alias or name] = name
    return keys


def _required_keys() -> List[str]:
    return [
        info.alias or name
        for name, info in Scenario.model_fields.items()
        if info.is_required()
    ]


def parse_grid(text: str) -> List[float]:
    """
    Parse ``a:b:step`` (inclusive of b) or a comma-separated list.

    Raises:
        ValueError: on a malformed range or an empty list
    """
    text = text.strip()
    if ":" in text:
        parts = [p.strip() for p in text.split(":")]
        if len(parts) != 3:
            raise ValueError(f"range must look like start:stop:step, got '{text}'")
        start, stop, step = (float(p) for p in parts)
        if step == 0 or not all(math.isfinite(v) for v in (start, stop, step)):
            raise ValueError("range step must be finite and non-zero")
        count = math.floor((stop - start) / step + 1e-9) + 1
        if count < 1:
            raise ValueError(f"range '{text}' is empty")
        return [round(start + i * step, 10) for i in range(count)]
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise ValueError("list is empty")
    return [float(item) for item in items]


def _split_line(raw: str, line_number: int) -> Optional[Tuple[str, str]]:
    line = raw.split("#", 1)[0].strip()
    if not line:
        return None
    if "=" not in line:
        raise ScenarioParseError("expected 'key = value'", line_number=line_number)
    key, value = (part.strip() for part in line.split("=", 1))
    if not key:
        raise ScenarioParseError("missing key before '='", line_number=line_number)
    if not value:
        raise ScenarioParseError("missing value", line_number=line_number, key=key)
    return key, value


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text into a validated Scenario."""
    known = _scenario_keys()
    raw: Dict[str, Any] = {}
    lines: Dict[str, int] = {}

    for line_number, line in enumerate(text.splitlines(), start=1):
        pair = _split_line(line, line_number)
        if pair is None:
            continue
        key, value = pair
        if key not in known:
            raise ScenarioParseError("unknown key", line_number=line_number, key=key)
        if key in raw:
            raise ScenarioParseError(
                f"duplicate key, first set on line {lines[key]}",
                line_number=line_number,
                key=key,
            )
        if key in LIST_KEYS:
            try:
                raw[key] = parse_grid(value)
            except ValueError as e:
                raise ScenarioParseError(str(e), line_number=line_number, key=key) from e
        else:
            raw[key] = value
        lines[key] = line_number

    for key in _required_keys():
        if key not in raw:
            raise ScenarioParseError("missing required key", key=key)

    try:
        return Scenario.model_validate(raw)
    except ValidationError as e:
        error = e.errors()[0]
        field = str(error["loc"][0]) if error["loc"] else None
        key = next((k for k, name in known.items() if name == field or k == field), field)
        raise ScenarioParseError(
            error["msg"], line_number=lines.get(key) if key else None, key=key
        ) from e
    except ComparatorMimoError as e:
        raise ScenarioParseError(str(e)) from e


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Read and validate a scenario file."""
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ", ".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_scenario(scenario: Scenario) -> str:
    """Scenario text that parses back to an equal Scenario."""
    lines = []
    for key, value in scenario.model_dump(mode="json", by_alias=True).items():
        if value is None:
            continue
        lines.append(f"{key} = {_format_value(value)}")
    return "\n".join(lines) + "\n"


def save_scenario(scenario: Scenario, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_scenario(scenario), encoding="utf-8")


def _format_number(value: Optional[float]) -> str:
    if value is None:
        return ""
    return format(value, ".10g")


def write_csv(report: SweepReport, stream: TextIO) -> None:
    """Write the report rows; numbers use '.' and 10 significant digits."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow(
            [
                _format_number(row.snr_db),
                row.metric,
                _format_number(row.value),
                _format_number(row.stderr),
                row.n_trials,
                row.seed,
                row.scenario_hash,
            ]
        )


def report_to_csv(report: SweepReport) -> str:
    buffer = io.StringIO()
    write_csv(report, buffer)
    return buffer.getvalue()


def emit_csv(report: SweepReport, path: Union[str, Path, TextIO]) -> None:
    """Write the report as CSV to a path or an open text stream."""
    if isinstance(path, (str, Path)):
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="") as f:
            write_csv(report, f)
    else:
        write_csv(report, path)
