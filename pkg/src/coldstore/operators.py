"""Collective atomic operators applied directly to sparse kets.

Every operator is expanded on the fly from its definition as a phased sum
of single-atom flips; no matrix over the full Hilbert space is ever formed.
Conventions (N atoms at positions z_j, wavevector k):

    sigma(k)        = N^{-1/2} sum_j |b_j><c_j| e^{-i k z_j}
    sigma_dagger(k) = N^{-1/2} sum_j |c_j><b_j| e^{+i k z_j}
    rho_ab(k)       = N^{-1}   sum_j |a_j><b_j| e^{+i k z_j}
    rho_ac(k)       = N^{-1}   sum_j |a_j><c_j| e^{+i k z_j}

and the quadrature/inversion combinations built from sigma:

    r1 = (sqrt(N)/2)(sigma_dagger + sigma)
    r2 = (-i sqrt(N)/2)(sigma_dagger - sigma)
    r3 = (N/2)(sigma_dagger sigma - sigma sigma_dagger)
    r_squared = (N/2)(sigma_dagger sigma + sigma sigma_dagger) + r3^2

Raising operations that would leave the truncated space raise
SectorOverflowError / FockOverflowError rather than silently truncating.
"""

from __future__ import annotations

import math
from bisect import insort
from dataclasses import dataclass

from .errors import FockOverflowError, SectorOverflowError
from .geometry import Geometry
from .states import AtomConfig, JointLabel, SparseKet, inner_product


def _apply_terms(ket: SparseKet, term_fn) -> SparseKet:
    """Apply a label -> [(label', coeff), ...] expansion to every entry.

    Iterates entries in canonical order so results are bit-reproducible.
    """
    out: dict[JointLabel, complex] = {}
    for label, amp in ket.items():
        for new_label, coeff in term_fn(label):
            out[new_label] = out.get(new_label, 0j) + coeff * amp
    return SparseKet(ket.space, out, _checked=True)


def _without(sites: tuple[int, ...], j: int) -> tuple[int, ...]:
    return tuple(v for v in sites if v != j)


def _with(sites: tuple[int, ...], j: int) -> tuple[int, ...]:
    out = list(sites)
    insort(out, j)
    return tuple(out)


def _b_sites(atoms: AtomConfig):
    occupied = set(atoms.c_sites) | set(atoms.a_sites)
    return (j for j in range(atoms.n_atoms) if j not in occupied)


def apply_sigma(ket: SparseKet, geometry: Geometry, k: float,
                dagger: bool = False) -> SparseKet:
    """Apply the collective b<->c lowering operator sigma(k) (or its adjoint)."""
    space = ket.space
    if geometry.n_atoms != space.n_atoms:
        raise ValueError(
            f"geometry has {geometry.n_atoms} atoms, space has {space.n_atoms}")
    phases = geometry.phases(k)
    root_n = math.sqrt(space.n_atoms)

    if dagger:
        def terms(label):
            atoms = label.atoms
            if atoms.n_excited + 1 > space.n_exc_max:
                if any(True for _ in _b_sites(atoms)):
                    raise SectorOverflowError(
                        f"sigma_dagger would push the atomic excitation count "
                        f"past the sector cap {space.n_exc_max}")
                return
            for j in _b_sites(atoms):
                new_atoms = AtomConfig(atoms.n_atoms, _with(atoms.c_sites, j),
                                       atoms.a_sites)
                yield (JointLabel(label.field, new_atoms),
                       phases[j] / root_n)
    else:
        def terms(label):
            atoms = label.atoms
            for j in atoms.c_sites:
                new_atoms = AtomConfig(atoms.n_atoms, _without(atoms.c_sites, j),
                                       atoms.a_sites)
                yield (JointLabel(label.field, new_atoms),
                       phases[j].conjugate() / root_n)

    return _apply_terms(ket, terms)


def apply_rho_ab(ket: SparseKet, geometry: Geometry, k: float,
                 dagger: bool = False) -> SparseKet:
    """b -> a promotion density rho_ab(k); the adjoint demotes a -> b."""
    space = ket.space
    phases = geometry.phases(k)
    n = space.n_atoms

    if dagger:
        def terms(label):
            atoms = label.atoms
            for j in atoms.a_sites:
                new_atoms = AtomConfig(n, atoms.c_sites, _without(atoms.a_sites, j))
                yield (JointLabel(label.field, new_atoms),
                       phases[j].conjugate() / n)
    else:
        def terms(label):
            atoms = label.atoms
            room = (atoms.n_a + 1 <= space.a_max
                    and atoms.n_excited + 1 <= space.n_exc_max)
            for j in _b_sites(atoms):
                if not room:
                    raise SectorOverflowError(
                        "rho_ab would exceed the excited-level or sector cap")
                new_atoms = AtomConfig(n, atoms.c_sites, _with(atoms.a_sites, j))
                yield (JointLabel(label.field, new_atoms), phases[j] / n)

    return _apply_terms(ket, terms)


def apply_rho_ac(ket: SparseKet, geometry: Geometry, k: float,
                 dagger: bool = False) -> SparseKet:
    """c -> a promotion density rho_ac(k); the adjoint demotes a -> c."""
    space = ket.space
    phases = geometry.phases(k)
    n = space.n_atoms

    if dagger:
        def terms(label):
            atoms = label.atoms
            for j in atoms.a_sites:
                new_atoms = AtomConfig(n, _with(atoms.c_sites, j),
                                       _without(atoms.a_sites, j))
                yield (JointLabel(label.field, new_atoms),
                       phases[j].conjugate() / n)
    else:
        def terms(label):
            atoms = label.atoms
            room = atoms.n_a + 1 <= space.a_max
            for j in atoms.c_sites:
                if not room:
                    raise SectorOverflowError(
                        "rho_ac would exceed the excited-level cap")
                new_atoms = AtomConfig(n, _without(atoms.c_sites, j),
                                       _with(atoms.a_sites, j))
                yield (JointLabel(label.field, new_atoms), phases[j] / n)

    return _apply_terms(ket, terms)


def apply_population(ket: SparseKet, level: str) -> SparseKet:
    """Diagonal operator counting atoms in 'b', 'c' or 'a'."""
    if level not in ("b", "c", "a"):
        raise ValueError(f"unknown level {level!r}")

    def terms(label):
        atoms = label.atoms
        if level == "c":
            count = atoms.n_c
        elif level == "a":
            count = atoms.n_a
        else:
            count = atoms.n_atoms - atoms.n_excited
        if count:
            yield label, float(count)

    return _apply_terms(ket, terms)


def apply_field(ket: SparseKet, mode_index: int, dagger: bool = False) -> SparseKet:
    """Photon annihilation (or creation) on one tracked field mode."""
    space = ket.space
    if not 0 <= mode_index < space.n_modes:
        raise ValueError(f"no tracked mode with index {mode_index}")
    cap = space.mode_caps[mode_index]
    total_cap = space.total_photon_cap

    def terms(label):
        m = label.field[mode_index]
        occ = list(label.field)
        if dagger:
            if m + 1 > cap or sum(occ) + 1 > total_cap:
                raise FockOverflowError(
                    f"creation on mode {mode_index} exceeds its Fock cap")
            occ[mode_index] = m + 1
            yield JointLabel(tuple(occ), label.atoms), math.sqrt(m + 1)
        elif m > 0:
            occ[mode_index] = m - 1
            yield JointLabel(tuple(occ), label.atoms), math.sqrt(m)

    return _apply_terms(ket, terms)


# -- quadrature / inversion combinations ---------------------------------

def apply_r1(ket: SparseKet, geometry: Geometry, k: float) -> SparseKet:
    n = ket.space.n_atoms
    up = apply_sigma(ket, geometry, k, dagger=True)
    down = apply_sigma(ket, geometry, k)
    return (math.sqrt(n) / 2.0) * (up + down)


def apply_r2(ket: SparseKet, geometry: Geometry, k: float) -> SparseKet:
    n = ket.space.n_atoms
    up = apply_sigma(ket, geometry, k, dagger=True)
    down = apply_sigma(ket, geometry, k)
    return (-0.5j * math.sqrt(n)) * (up - down)


def _updown_minus_downup(ket, geometry, k):
    up_down = apply_sigma(apply_sigma(ket, geometry, k), geometry, k, dagger=True)
    down_up = apply_sigma(apply_sigma(ket, geometry, k, dagger=True), geometry, k)
    return up_down, down_up


def apply_r3(ket: SparseKet, geometry: Geometry, k: float) -> SparseKet:
    """Half-inversion operator; needs one unit of sector headroom."""
    n = ket.space.n_atoms
    up_down, down_up = _updown_minus_downup(ket, geometry, k)
    return (n / 2.0) * (up_down - down_up)


def apply_r_squared(ket: SparseKet, geometry: Geometry, k: float) -> SparseKet:
    """Total-angular-momentum-squared analogue; needs sector headroom 1."""
    n = ket.space.n_atoms
    up_down, down_up = _updown_minus_downup(ket, geometry, k)
    diff = up_down - down_up
    dd_up_down, dd_down_up = _updown_minus_downup(diff, geometry, k)
    return ((n / 2.0) * (up_down + down_up)
            + (n * n / 4.0) * (dd_up_down - dd_down_up))


# -- uniform operator handle ----------------------------------------------

_KIND_NEEDS_K = {
    "sigma": True, "sigma_dagger": True,
    "rho_ab": True, "rho_ab_dagger": True,
    "rho_ac": True, "rho_ac_dagger": True,
    "pop_b": False, "pop_c": False, "pop_a": False,
    "r1": True, "r2": True, "r3": True, "r_squared": True,
}

_ADJOINT = {
    "sigma": "sigma_dagger", "sigma_dagger": "sigma",
    "rho_ab": "rho_ab_dagger", "rho_ab_dagger": "rho_ab",
    "rho_ac": "rho_ac_dagger", "rho_ac_dagger": "rho_ac",
    "pop_b": "pop_b", "pop_c": "pop_c", "pop_a": "pop_a",
    "r1": "r1", "r2": "r2", "r3": "r3", "r_squared": "r_squared",
}


@dataclass(frozen=True)
class CollectiveOperator:
    """A named collective operator bound to a geometry and wavevector."""

    kind: str
    geometry: Geometry
    wavevector: float | None = None

    def __post_init__(self):
        if self.kind not in _KIND_NEEDS_K:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if _KIND_NEEDS_K[self.kind] and self.wavevector is None:
            raise ValueError(f"operator kind {self.kind!r} needs a wavevector")
        if not _KIND_NEEDS_K[self.kind] and self.wavevector is not None:
            raise ValueError(f"operator kind {self.kind!r} takes no wavevector")

    def adjoint(self) -> "CollectiveOperator":
        return CollectiveOperator(_ADJOINT[self.kind], self.geometry,
                                  self.wavevector)

    def apply(self, ket: SparseKet) -> SparseKet:
        g, k = self.geometry, self.wavevector
        kind = self.kind
        if kind == "sigma":
            return apply_sigma(ket, g, k)
        if kind == "sigma_dagger":
            return apply_sigma(ket, g, k, dagger=True)
        if kind == "rho_ab":
            return apply_rho_ab(ket, g, k)
        if kind == "rho_ab_dagger":
            return apply_rho_ab(ket, g, k, dagger=True)
        if kind == "rho_ac":
            return apply_rho_ac(ket, g, k)
        if kind == "rho_ac_dagger":
            return apply_rho_ac(ket, g, k, dagger=True)
        if kind == "pop_b":
            return apply_population(ket, "b")
        if kind == "pop_c":
            return apply_population(ket, "c")
        if kind == "pop_a":
            return apply_population(ket, "a")
        if kind == "r1":
            return apply_r1(ket, g, k)
        if kind == "r2":
            return apply_r2(ket, g, k)
        if kind == "r3":
            return apply_r3(ket, g, k)
        return apply_r_squared(ket, g, k)


def commutator_matrix_element(op_a: CollectiveOperator, op_b: CollectiveOperator,
                              x: SparseKet, y: SparseKet) -> complex:
    """<x| [A, B] |y> evaluated by two operator applications per ordering."""
    ab = op_a.apply(op_b.apply(y))
    ba = op_b.apply(op_a.apply(y))
    return inner_product(x, ab) - inner_product(x, ba)


def sigma_commutator_element(geometry: Geometry, k: float, k_prime: float,
                             x: SparseKet, y: SparseKet) -> complex:
    """<x| [sigma(k), sigma_dagger(k')] |y> convenience wrapper."""
    op_a = CollectiveOperator("sigma", geometry, k)
    op_b = CollectiveOperator("sigma_dagger", geometry, k_prime)
    return commutator_matrix_element(op_a, op_b, x, y)


@dataclass(frozen=True)
class AngularMomentumCheck:
    """Rayleigh quotients and eigen-residuals for r3 and r_squared."""

    r3_eigenvalue: float
    r3_residual: float
    r_squared_eigenvalue: float
    r_squared_residual: float


def angular_momentum_eigencheck(ket: SparseKet, geometry: Geometry,
                                k: float) -> AngularMomentumCheck:
    """Measure how close ``ket`` is to a joint (r3, r_squared) eigenvector.

    The eigenvalue estimates are Rayleigh quotients; each residual is
    || R x - lambda x || / || x ||, so an exact eigenvector gives 0.
    """
    nrm2 = inner_product(ket, ket).real
    if nrm2 == 0.0:
        raise ValueError("eigencheck needs a nonzero vector")
    out = []
    for apply_fn in (apply_r3, apply_r_squared):
        image = apply_fn(ket, geometry, k)
        lam = inner_product(ket, image).real / nrm2
        residual = (image - lam * ket).norm() / math.sqrt(nrm2)
        out.extend([lam, residual])
    return AngularMomentumCheck(*out)
