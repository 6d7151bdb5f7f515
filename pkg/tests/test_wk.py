import json
import random
import threading
from fractions import Fraction

import pytest

from pseudohodge.wk import (
    TauIndex,
    WKCapExceeded,
    WKEngine,
    one_point_closed_form,
    psi_intersection,
    string_reduce,
)


@pytest.mark.parametrize(
    "g, d, expected",
    [
        (0, (0, 0, 0), Fraction(1)),
        (0, (0, 0, 0, 1), Fraction(1)),
        (0, (0, 0, 0, 1, 1), Fraction(2)),
        (0, (0, 0, 0, 1, 1, 1), Fraction(6)),
        (1, (1,), Fraction(1, 24)),
        (1, (1, 1), Fraction(1, 24)),
        (1, (2, 1, 0), Fraction(1, 12)),
        (2, (4,), Fraction(1, 1152)),
        (2, (4, 1), Fraction(1, 384)),
        (2, (3, 2), Fraction(29, 5760)),
        (3, (7,), Fraction(1, 82944)),
        (3, (7, 1), Fraction(5, 82944)),
        (3, (6, 2), Fraction(77, 414720)),
        (3, (5, 3), Fraction(503, 1451520)),
        (3, (4, 4), Fraction(607, 1451520)),
    ],
)
def test_oracle_values(g, d, expected):
    assert psi_intersection((g, d)) == expected
    assert WKEngine(string_shortcut=False).value(g, d) == expected


def test_dimension_mismatch_is_zero():
    assert psi_intersection((2, (3,))) == 0
    assert psi_intersection((0, (1, 1, 0))) == 0


def test_unstable_rejected():
    with pytest.raises(ValueError):
        psi_intersection((0, (0, 0)))
    with pytest.raises(ValueError):
        TauIndex(1, (-1,))


@pytest.mark.parametrize("g", range(1, 11))
def test_one_point_closed_form(g):
    assert psi_intersection((g, (3 * g - 2,))) == one_point_closed_form(g)


def test_genus_zero_multinomial():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(3, 9)
        d = [0] * n
        for _ in range(n - 3):
            d[rng.randrange(n)] += 1
        expected = Fraction(_fact(n - 3), _prod_fact(d))
        assert psi_intersection((0, d)) == expected


def _fact(m):
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out


def _prod_fact(d):
    out = 1
    for x in d:
        out *= _fact(x)
    return out


def test_string_reduce_examples():
    out = string_reduce(TauIndex(1, (0, 1, 1)))
    assert out == [TauIndex(1, (0, 1)), TauIndex(1, (1, 0))]
    assert string_reduce(TauIndex(0, (0, 0, 0, 1))) == [TauIndex(0, (0, 0, 0))]
    with pytest.raises(ValueError):
        string_reduce(TauIndex(2, (4,)))
    with pytest.raises(ValueError):
        string_reduce(TauIndex(0, (0, 0, 0)))


def _random_admissible(rng, max_dim=24):
    while True:
        g = rng.randint(0, 6)
        n = rng.randint(1, 7)
        if 2 * g - 2 + n <= 0:
            continue
        dim = 3 * g - 3 + n
        if dim > max_dim:
            continue
        d = [0] * n
        for _ in range(dim):
            d[rng.randrange(n)] += 1
        return g, d


def test_string_and_dilaton_equations():
    engine = WKEngine(string_shortcut=False)
    rng = random.Random(20240611)
    checked = 0
    while checked < 500:
        g, d = _random_admissible(rng, 21)
        n = len(d)
        # string: <tau_0 prod tau_d> = sum_j <... tau_{d_j - 1} ...>
        lhs = engine.value(g, [0] + d)
        rhs = sum((engine.value(g, d[:j] + [d[j] - 1] + d[j + 1 :]) for j in range(n) if d[j] > 0), Fraction(0))
        assert lhs == rhs
        # dilaton: <tau_1 prod tau_d> = (2g - 2 + n) <prod tau_d>
        assert engine.value(g, [1] + d) == (2 * g - 2 + n) * engine.value(g, d)
        checked += 1


def test_symmetry():
    rng = random.Random(3)
    for _ in range(50):
        g, d = _random_admissible(rng, 15)
        perm = d[:]
        rng.shuffle(perm)
        assert psi_intersection((g, perm)) == psi_intersection((g, d))


def test_cap():
    engine = WKEngine(cap=9)
    assert engine.value(3, (4, 4)) > 0
    with pytest.raises(WKCapExceeded):
        engine.value(4, (5, 6))


def test_cache_round_trip(tmp_path):
    a = WKEngine()
    a.value(4, (10,))
    a.value(3, (3, 3, 2))
    path = tmp_path / "wk.json"
    a.save(path)
    b = WKEngine()
    assert b.load(path) == len(a)
    assert b._memo == a._memo
    assert b.value(4, (10,)) == one_point_closed_form(4)


@pytest.mark.parametrize(
    "entry",
    [
        {"g": 1, "d": [1, 0], "value": {"num": "1", "den": "24"}},  # not sorted
        {"g": 1, "d": [2], "value": {"num": "1", "den": "24"}},  # not admissible
        {"g": 1, "d": [1], "value": {"num": "1", "den": "0"}},
    ],
)
def test_cache_rejects_bad_entries(tmp_path, entry):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"entries": [entry]}))
    engine = WKEngine()
    with pytest.raises(ValueError):
        engine.load(path)
    assert len(engine) == 0


def test_concurrent_readers():
    engine = WKEngine()
    targets = [(3, (7,)), (3, (4, 4)), (4, (5, 5)), (5, (13,)), (4, (3, 3, 3, 1))]
    reference = {t: WKEngine().value(*t) for t in targets}
    errors = []

    def work(seed):
        rng = random.Random(seed)
        for _ in range(20):
            t = rng.choice(targets)
            if engine.value(*t) != reference[t]:
                errors.append(t)

    threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors


def test_explicit_empty_engine_is_used():
    engine = WKEngine()
    assert psi_intersection((3, (7,)), engine) == Fraction(1, 82944)
    assert len(engine) > 0
