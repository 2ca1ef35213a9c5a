import math
import random
import sys

import pytest

from kanmi import Dataset

TABLE1 = [("M", "A"), ("M", "B"), ("F", "B"), ("F", "A"), ("M", "C"),
          ("F", "C"), ("M", "C"), ("F", "C"), ("F", "A"), ("M", "B")]


@pytest.fixture
def table1():
    return Dataset(TABLE1, ["attribute1", "attribute2"])


def random_dataset(rng: random.Random, n_max=50, r_max=6, p_max=5, n_min=1) -> Dataset:
    n = rng.randint(n_min, n_max)
    r = rng.randint(1, r_max)
    ps = [rng.randint(1, p_max) for _ in range(r)]
    return Dataset([tuple(f"v{rng.randrange(p)}" for p in ps) for _ in range(n)])


def nmi_oracle(a, b) -> float:
    """Sample NMI by explicit set intersections, log base k_a * k_b."""
    n = len(a)
    A, B = sorted(set(a)), sorted(set(b))
    if len(A) * len(B) == 1:
        return 1.0
    total = 0.0
    for h in A:
        ch = {j for j in range(n) if a[j] == h}
        for g in B:
            cg = {j for j in range(n) if b[j] == g}
            c = len(ch & cg)
            if c:
                total += c * math.log(c * n / (len(ch) * len(cg)), len(A) * len(B))
    return 2 / n * total


def anmi_oracle(dataset: Dataset, labels) -> float:
    cols = [[rec[i] for rec in dataset.records] for i in range(dataset.num_attributes)]
    return sum(nmi_oracle(list(labels), col) for col in cols) / len(cols)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
