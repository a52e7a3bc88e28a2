import random

import pytest
import sympy

from ffgcd import RationalFunction
from ffgcd.harness import generators as gen
from ffgcd.linalg import SingularMatrixError, k_det, k_inverse, k_matmul, k_rank, q_independent, q_rank

K = RationalFunction.parse
tt = sympy.Symbol("t")


def to_sympy(rows):
    return sympy.Matrix([[sympy.sympify(str(x).replace("^", "**"), locals={"t": tt}) for x in r] for r in rows])


@pytest.mark.parametrize("seed", range(8))
def test_det_rank_inverse_match_sympy(seed):
    rnd = random.Random(seed)
    n = rnd.randint(1, 4)
    rows = [[gen.rand_rf(rnd, 2) if rnd.random() < 0.8 else RationalFunction(0) for _ in range(n)]
            for _ in range(n)]
    if rnd.random() < 0.3 and n > 1:
        rows[-1] = [a * K("t+2") + b for a, b in zip(rows[0], rows[1])] if n > 2 else [a * K("t") for a in rows[0]]
    S = to_sympy(rows)
    assert k_rank(rows) == S.rank(simplify=True)
    det = k_det(rows)
    assert sympy.simplify(to_sympy([[det]])[0] - S.det()) == 0
    if det.is_zero():
        with pytest.raises(SingularMatrixError):
            k_inverse(rows)
    else:
        inv = k_inverse(rows)
        prod = k_matmul(rows, inv)
        assert all(prod[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


def test_rational_rank():
    assert q_rank([K("t"), K("t+1"), K("1")]) == 2
    assert q_independent([K("1"), K("t"), K("t^2")])
    assert not q_independent([K("t/(t+1)"), K("2*t/(t+1)")])
    assert q_rank([K("1/t"), K("1/(t+1)"), K("1/(t^2+t)")]) == 2
