"""Acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line with its runtime and the budget it
has to meet.  Run directly (``python tests/test_acceptance.py``) for the bare
report without pytest's output.
"""

import json
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import is_nilpotent_sympy, oracle_drazin, satisfies_drazin_sympy, spectral_matrix  # noqa: E402
from hirano import blockthm as bt  # noqa: E402
from hirano import cli, decomp, formats, genfuzz  # noqa: E402
from hirano import gendrazin as gd  # noqa: E402
from hirano.blockthm import TheoremId  # noqa: E402
from hirano.ratmat import Matrix, Poly, block_assemble, char_poly  # noqa: E402

DATA = Path(__file__).parent / "data"
SEED = 2024


class Criterion:
    def __init__(self, number: int, title: str, budget: float):
        self.number, self.title, self.budget = number, title, budget
        self.failures: list[str] = []

    def check(self, ok: bool, what: str) -> None:
        if not ok:
            self.failures.append(what)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if self.elapsed >= self.budget:
            self.failures.append(f"took {self.elapsed:.2f}s, budget {self.budget:g}s")
        status = "PASS" if not self.failures else "FAIL"
        line = f"[{status}] criterion {self.number}: {self.title} ({self.elapsed:.2f}s / {self.budget:g}s)"
        if self.failures:
            line += " -- " + "; ".join(self.failures[:3])
        _emit(line)
        return True

    @property
    def passed(self) -> bool:
        return not self.failures


_capsys = None


def _emit(line: str) -> None:
    if _capsys is not None:
        with _capsys.disabled():
            print("\n" + line)
    else:
        print(line)


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    global _capsys
    _capsys = capsys
    yield
    _capsys = None


def _theorem_json(tid: str, blocks_file: str) -> dict:
    argv = ["theorem", "--id", tid, "--blocks", str(DATA / blocks_file)]
    if _capsys is None:
        from contextlib import redirect_stdout
        from io import StringIO

        buf = StringIO()
        with redirect_stdout(buf):
            code = cli.main(argv)
        text = buf.getvalue()
    else:
        _capsys.readouterr()
        code = cli.main(argv)
        text = _capsys.readouterr().out
    assert code == 0
    return json.loads(text)


def _tripotent_poly_factors(m: Matrix) -> bool:
    return gd.tripotent_factorization(char_poly(m)) is not None


# -- regressions on fixed blocks ----------------------------------------------------------


def test_criterion_1_hirano_corollary_example():
    with Criterion(1, "2x2 block example is Hirano invertible, with the stated A - A^3", 1.0) as c:
        payload = _theorem_json("C3_5", "corollary_blocks.json")
        c.check(payload["verdict"] == "Verified", f"verdict {payload['verdict']}")
        inst, _ = formats.load_blocks(DATA / "corollary_blocks.json")
        a, m = inst["A"], inst.m
        c.check(a - a @ a @ a == Matrix([[0, 0], [-4, 0]]), "A - A^3 mismatch")
        c.check(gd.is_nilpotent(m - m @ m @ m) is not None, "M - M^3 not nilpotent")
        c.check(_tripotent_poly_factors(m), "char poly has a root outside {-1, 0, 1}")
    assert c.passed, c.failures


def test_criterion_2_annihilator_example():
    with Criterion(2, "annihilator example verifies with zero residuals", 1.0) as c:
        payload = _theorem_json("T3_7", "annihilator_blocks.json")
        c.check(payload["verdict"] == "Verified", f"verdict {payload['verdict']}")
        residuals = {h["name"]: h["residual"] for h in payload["hypotheses"]["hypotheses"]}
        for name in ("AB=0", "BD^H=0", "D^piCB=0"):
            zero = all(x == "0" for row in residuals[name] for x in row)
            c.check(zero, f"{name} residual nonzero")
    assert c.passed, c.failures


def test_criterion_3_truncated_sequence_example():
    with Criterion(3, "truncated sequence example verifies, char poly x(x-1)^5", 1.0) as c:
        payload = _theorem_json("T2_7", "truncation_blocks.json")
        c.check(payload["verdict"] == "Verified", f"verdict {payload['verdict']}")
        inst, _ = formats.load_blocks(DATA / "truncation_blocks.json")
        c.check(char_poly(inst.m) == Poly.from_roots([0, 1, 1, 1, 1, 1]), f"char poly {char_poly(inst.m)}")
    assert c.passed, c.failures


# -- randomized equivalences ---------------------------------------------------------------


def test_criterion_4_drazin_oracle():
    with Criterion(4, "Drazin inverse matches brute-force oracle on 200 3x3 matrices", 30.0) as c:
        rng = random.Random(SEED)
        for i in range(200):
            a = Matrix([[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)])
            z = gd.drazin_inverse(a).dinv
            if z != oracle_drazin(a) or not satisfies_drazin_sympy(a, z):
                c.check(False, f"matrix {i}: {a.to_strings()}")
    assert c.passed, c.failures


def test_criterion_5_soundness_sweep():
    with Criterion(5, "soundness sweep, 18 results x 500 instances at sizes 2-4", 300.0) as c:
        cfg = genfuzz.GenConfig(seed=SEED, trials=500)
        for tid in TheoremId:
            s = genfuzz.soundness_sweep(tid, cfg)
            c.check(s.trials == 500 and s.verified == 500, f"{tid}: {s.verified}/{s.trials} verified")
            c.check(not s.counterexamples, f"{tid}: {len(s.counterexamples)} counterexamples")
    assert c.passed, c.failures


def test_criterion_6_characterization():
    with Criterion(6, "Hirano criteria agree on 500 matrices, certificates verify", 60.0) as c:
        rng = random.Random(SEED)
        for i in range(500):
            a = spectral_matrix(rng, rng.randint(1, 4), (-1, 0, 1, 2))
            hir = gd.is_hirano_invertible(a) is not None
            eig = gd.eigencheck_hirano(a)
            sq = gd.is_strongly_drazin_invertible(a @ a) is not None
            c.check(hir == eig == sq, f"matrix {i}: hirano {hir}, eigen {eig}, square {sq}")
            if not hir:
                continue
            split = decomp.tripotent_nilpotent(a)
            e, n = split.structured_part, split.nilpart
            ok = e @ e @ e == e and e + n == a and e @ n == n @ e and is_nilpotent_sympy(n)
            c.check(ok, f"matrix {i}: tripotent split")
            cert = gd.hirano_inverse(a)
            gd.verify_hirano_cert(a, cert)
            c.check(e @ e == a @ gd.drazin_inverse(a).dinv, f"matrix {i}: E^2 != AA^D")
    assert c.passed, c.failures


def test_criterion_7_g_formula():
    with Criterion(7, "closed-form inverse of the triangular block matrix on 200 instances", 60.0) as c:
        for i in range(200):
            cfg = genfuzz.GenConfig(seed=SEED, block_size=2 + i % 3)
            inst = genfuzz.gen_instance(TheoremId.T3_4, cfg, i)
            _, z, _ = bt.g_matrix(inst)
            d = inst["D"]
            q = block_assemble(inst["A"], Matrix.zeros(*inst["B"].shape), inst["C"],
                               d @ d @ gd.drazin_inverse(d).dinv)
            c.check(z == gd.drazin_inverse(q).dinv, f"instance {i}: differs from Drazin inverse")
            eqs = q @ z == z @ q and z @ q @ z == z and gd.is_nilpotent(q @ q - q @ z) is not None
            c.check(eqs, f"instance {i}: Hirano equations fail")
    assert c.passed, c.failures


def test_criterion_8_cline():
    with Criterion(8, "Cline transfer matches direct Drazin inverse on 200 pairs", 30.0) as c:
        rng = random.Random(SEED)
        for i in range(200):
            n = rng.randint(1, 4)
            a = Matrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
            b = Matrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
            out = gd.cline_transfer(a, b, gd.drazin_inverse(b @ a).dinv)
            c.check(out == gd.drazin_inverse(a @ b).dinv, f"pair {i}")
    assert c.passed, c.failures


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
