import os
import random
import subprocess
import sys

import numpy as np
import pytest

from kanmi import KanmiConfig, initialize, run
from kanmi import kernels
from kanmi.algorithm import ClusterState
from kanmi.experiments import load_benchmark

from conftest import random_dataset

needs_ext = pytest.mark.skipif("cython" not in kernels.BACKENDS, reason="extension not built")


@needs_ext
@pytest.mark.parametrize("name", ["votes", "cancer"])
def test_backends_agree_on_benchmarks(name):
    ds = load_benchmark(name)
    for k in (2, 5, 9):
        a = run(ds, KanmiConfig(k), "python")
        b = run(ds, KanmiConfig(k), "cython")
        assert a.labels == b.labels
        assert a.moves_per_sweep == b.moves_per_sweep
        assert a.anmi_history == b.anmi_history


@needs_ext
def test_backends_agree_on_random_data():
    rng = random.Random(17)
    for _ in range(40):
        ds = random_dataset(rng, n_min=3)
        k = rng.randint(2, min(5, ds.n))
        a, b = initialize(ds, k, "python"), initialize(ds, k, "cython")
        assert np.array_equal(a.labels, b.labels) and np.array_equal(a.cah, b.cah)
        assert run(ds, k, "python").labels == run(ds, k, "cython").labels


@pytest.mark.parametrize("backend", sorted(kernels.BACKENDS))
def test_state_consistent_after_run(backend):
    rng = random.Random(3)
    for _ in range(30):
        ds = random_dataset(rng, n_min=2)
        k = rng.randint(2, min(6, ds.n))
        state = initialize(ds, k, backend)
        state.check()
        from kanmi.algorithm import sweep
        for _ in range(3):
            sweep(state, KanmiConfig(k), backend)
            state.check()


def test_unknown_backend_name():
    with pytest.raises(KeyError):
        kernels.get("fortran")


@pytest.mark.parametrize("value, ok", [("python", True), ("bogus", False)])
def test_env_selection(value, ok):
    env = dict(os.environ, KANMI_BACKEND=value)
    proc = subprocess.run([sys.executable, "-c", "import kanmi; print(kanmi.BACKEND)"],
                          env=env, capture_output=True, text=True)
    if ok:
        assert proc.returncode == 0 and proc.stdout.strip() == value
    else:
        assert proc.returncode != 0 and "KANMI_BACKEND" in proc.stderr
