import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parent.parent / "demos"


@pytest.mark.parametrize("script", ["roundtrip.py", "topos.py"])
def test_demo_runs(script):
    out = subprocess.run([sys.executable, str(DEMOS / script)], capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert "holds" in out.stdout
