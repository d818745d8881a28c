from pathlib import Path
from typing import Literal

import structlog

from cqed_tempo.utils.units import mev_to_ev

from .bath_types import BathError, ModeFileError, ModeList

logger = structlog.stdlib.get_logger(__name__)


def load_modes(path: Path | str, units: Literal["ev", "mev"] = "ev") -> ModeList:
    """Read `<energy> <partial_hrf>` lines; `#` starts a comment."""
    path = Path(path)
    if not path.is_file():
        raise ModeFileError(f"Mode file not found: {path}")
    pairs: list[tuple[float, float]] = []
    for line_number, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ModeFileError(
                f"{path}:{line_number}: expected 2 columns, got {len(fields)}"
            )
        try:
            energy, hrf = float(fields[0]), float(fields[1])
        except ValueError as exc:
            raise ModeFileError(f"{path}:{line_number}: {exc}") from exc
        if energy <= 0 or hrf < 0:
            raise ModeFileError(
                f"{path}:{line_number}: negative or zero frequency or negative HRF"
            )
        pairs.append((mev_to_ev(energy) if units == "mev" else energy, hrf))

    try:
        modes = ModeList.from_pairs(pairs)
    except BathError as exc:
        raise ModeFileError(f"{path}: {exc}") from exc

    logger.info(
        "modes_loaded",
        path=str(path),
        count=len(modes),
        total_hrf=modes.total_hrf,
    )
    return modes
