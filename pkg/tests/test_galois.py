import numpy as np
import pytest

from dwfsim.galois import build_field, build_striations, check_geometry, field_trace, line_through

# element encoding for order 4: 0, 1, w, w+1
W = 2
W1 = 3


def test_unsupported_order():
    with pytest.raises(ValueError):
        build_field(5)
    with pytest.raises(ValueError):
        build_field(6)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_field_axioms(n):
    build_field(n).check_axioms()


def test_gf2_characteristic():
    f = build_field(2)
    assert f.add[1, 1] == 0


def test_gf4_tables():
    f = build_field(4)
    assert f.add[W, W] == 0          # w + w = 0
    assert f.mul[W, W] == W1         # w * w = w + 1
    assert f.mul[W, W1] == 1         # w * (w+1) = w^2 + w = 1
    assert f.add[W, 1] == W1
    assert f.labels == ("0", "1", "w", "w+1")


def test_gf4_trace_values():
    f = build_field(4)
    assert [field_trace(f, x) for x in range(4)] == [0, 0, 1, 1]


def test_trace_is_identity_on_prime_fields():
    for n in (2, 3):
        f = build_field(n)
        assert [field_trace(f, x) for x in range(n)] == list(range(n))


def test_trace_additivity():
    f = build_field(4)
    for x in range(4):
        for y in range(4):
            s = f.add[x, y]
            assert field_trace(f, s) == (field_trace(f, x) + field_trace(f, y)) % 2


def test_trace_of_zero():
    for n in (2, 3, 4):
        assert field_trace(build_field(n), 0) == 0


@pytest.mark.parametrize("n,count", [(2, 3), (3, 4), (4, 5)])
def test_striation_counts(n, count):
    strs = build_striations(build_field(n))
    assert len(strs) == count
    for s in strs:
        assert len(s) == n
        for line in s:
            assert len(line.points) == n


@pytest.mark.parametrize("n", [2, 3, 4])
def test_geometry_exhaustive(n):
    check_geometry(build_striations(build_field(n)))


def test_lines_solve_linear_equation():
    # striation s < N: lines are p = s*q + c
    f = build_field(4)
    strs = build_striations(f)
    for s in range(4):
        for line in strs[s]:
            for (q, p) in line.points:
                assert p == f.add[f.mul[s, q], line.index]
    for line in strs[4]:
        assert all(q == line.index for (q, _) in line.points)


def test_line_through():
    strs = build_striations(build_field(3))
    ln = line_through(strs, 0, (1, 2))
    assert (1, 2) in ln.points
    with pytest.raises(ValueError):
        line_through(strs, 0, (9, 9))
