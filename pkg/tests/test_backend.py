import os
import subprocess
import sys

import pytest

SCRIPT = """
import gersten_lab
from gersten_lab import cli
print(gersten_lab.BACKEND)
cli.main(["verify", "--count", "3", "--only", "category.composition,category.classify-roundtrip,k0.additivity"])
cli.main(["verify", "--ring", "Q[t]@t", "--count", "2", "--only", "category.triangulation,k0.telescope"])
"""


def run(backend):
    env = dict(os.environ, GERSTEN_LAB_BACKEND=backend)
    return subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True).stdout


def test_backends_agree():
    py = run("python")
    name, _, rest = py.partition("\n")
    assert name == "python"
    try:
        import flint  # noqa: F401
    except ImportError:
        pytest.skip("python-flint not installed")
    fl = run("flint")
    fname, _, frest = fl.partition("\n")
    assert fname == "flint"
    assert rest == frest


def test_unknown_backend_fails():
    env = dict(os.environ, GERSTEN_LAB_BACKEND="gmp")
    r = subprocess.run([sys.executable, "-c", "import gersten_lab"], env=env, capture_output=True, text=True)
    assert r.returncode != 0 and "GERSTEN_LAB_BACKEND" in r.stderr
