import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from nichols_lift.config import parse_config, resolve  # noqa: E402


def load(path: str, **kw):
    return resolve(parse_config(Path(path).read_text()), **kw)
