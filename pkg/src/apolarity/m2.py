"""Macaulay2 scripts that re-check a family cubic independently."""

from __future__ import annotations

from .exactalg import Field
from .families import FamilyDescriptor

_HEADER = """-- small tangent space check, n = {n}
kk = {kk};
n = {n};
"""

_SPECIAL = {
    "SpecialN6": """S = kk[a_1,a_2,b_1,b_2,c_1,c_2];
F = a_1*b_1*c_1 + a_2*b_2*c_2 + a_1*a_2^2 + b_1*b_2^2 +
    c_1*c_2^2 + a_1^3 + b_1^3 + c_1^3;
""",
    "SpecialN8": """S = kk[a_1,a_2,b_1,b_2,c_1,c_2,d,e];
F = a_1*b_1*c_1 + a_2*b_2*c_2 + a_1*a_2^2 + b_1*b_2^2 +
    c_1*c_2^2 + a_1*d*e + b_1^2*d + c_1^2*e;
""",
    "ThreeM": """m = n//3;
S = kk[a_1..a_m,b_1..b_m,c_1..c_m];
F = 0;
for i in 1..m-1 do F = F + a_i*b_i*c_i + a_i*a_(i+1)^2 +
    b_i*b_(i+1)^2 + c_i*c_(i+1)^2;
F = F + a_m*b_m*c_m + a_m*a_1^2 + b_m*b_1^2 + c_m*c_1^2;
""",
    "ThreeMplus1": """m = (n-1)//3;
S = kk[a_1..a_m,b_1..b_m,c_1..c_m,d];
F = 0;
for i in 1..m-1 do F = F + a_i*b_i*c_i + a_i*a_(i+1)^2 +
    b_i*b_(i+1)^2 + c_i*c_(i+1)^2 + a_i*b_(i+1)*d;
F = F + a_m*b_m*c_m + a_m*a_1^2 + b_m*b_1^2 + c_m*c_1^2 +
    a_m*b_1*d;
""",
    "ThreeMplus2": """m = (n-2)//3;
S = kk[a_1..a_m,b_1..b_m,c_1..c_m,d,e];
F = 0;
for i in 1..m-1 do F = F + a_i*b_i*c_i + a_i*a_(i+1)^2 +
    b_i*b_(i+1)^2 + c_i*c_(i+1)^2 + a_i*b_(i+1)*d +
    b_i*c_(i+1)*e;
F = F + a_m*b_m*c_m + a_m*a_1^2 + b_m*b_1^2 + c_m*c_1^2 +
    a_m*b_1*d + b_m*c_1*e;
""",
}

_CHECK = """I = ideal fromDual(matrix{{F}}, DividedPowers => true);
if (hilbertFunction(0,S/I) == 1 and
    hilbertFunction(1,S/I) == n and
    hilbertFunction(4,S/I^2) == n and
    hilbertFunction(5,S/I^2) == 0)
    then print True else print False;
"""


def m2_field(F: Field) -> str:
    return "QQ" if F.characteristic == 0 else f"ZZ/{F.characteristic}"


def m2_script(n: int, F: Field) -> str:
    """Script that builds the family cubic for ``n`` and runs the four Hilbert function checks."""
    desc = FamilyDescriptor.for_n(n)
    return _HEADER.format(n=n, kk=m2_field(F)) + _SPECIAL[desc.kind] + _CHECK
