import pytest

from atomspec.construct import component, realize
from atomspec.modact import ModuleElem
from atomspec.poset import chain, from_hasse
from atomspec.quiver import Finite, Loop, Tilde, materialize, point
from atomspec.series import ColorId


@pytest.fixture
def loop():
    return Loop("p")


@pytest.fixture
def ray():
    """Tilde of a single vertex: (0,v) -> (1,v) -> ... all colored c_{v,v}."""
    return Tilde(point("v"), "t")


@pytest.fixture
def ray_color():
    return ColorId.cross("t", ("v",), ("v",))


@pytest.fixture
def edge_tilde():
    """Tilde of the quiver v --c--> w."""
    return Tilde(Finite(("v", "w"), (("v", "w", ColorId.named("c")),)), "t")


def x(host, *addr, coeff=1):
    return ModuleElem.basis(host, addr, coeff)


@pytest.fixture
def vee():
    return from_hasse(["p", "q", "r"], [("p", "q"), ("p", "r")])


def tilde_components(P):
    G = realize(P)
    return [component(G, p) for p in P.elements if isinstance(component(G, p), Tilde)]


@pytest.fixture
def chain3_top():
    return component(realize(chain(3)), "x0")
