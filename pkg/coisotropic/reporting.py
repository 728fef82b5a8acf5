"""Report models printed by the command line, as text or JSON."""

from collections.abc import Sequence
from typing import Any

from pydantic import BaseModel

from coisotropic.exact_linalg import QMatrix
from coisotropic.ingredients import ValidationReport
from coisotropic.invariants import InvariantReport, SplittingResult
from coisotropic.orbitspace import Decomposition
from coisotropic.polytope import VertexReport


def _q(values: Sequence[object]) -> list[str]:
    return [str(x) for x in values]


def _matrix(m: QMatrix) -> list[list[str]]:
    return [_q(row) for row in m.to_rows()]


# --- Models ---


class VertexModel(BaseModel):
    vertex: list[str]
    simple: bool
    edges: list[list[int]]
    edge_determinant: int | None


class ValidationModel(BaseModel):
    passed: bool
    antisymmetric: bool
    contained: bool
    delzant: bool
    centered: bool
    rank: bool
    integral: bool
    cyclic: bool
    hom_c: bool
    homomorphic: bool | None = None
    delzant_rejection: VertexModel | None = None
    offending_pair: list[int] | None = None
    offending_triple: list[int] | None = None
    cyclic_value: str | None = None
    hom_c_violation: list[list[int]] | None = None
    notes: list[str] = []


class H1Model(BaseModel):
    torsion: list[int]
    free_rank: int


class DimModuliModel(BaseModel):
    direct: int
    formula_crosscheck: int | None
    stated_formula: int
    corrected_formula: int


class SplittingModel(BaseModel):
    feasible: bool
    complement: list[list[int]] | None = None
    shift: list[list[str]] | None = None
    obstruction_pair: list[int] | None = None
    obstruction_coordinate: int | None = None
    obstruction_equation: str | None = None


class InvariantModel(BaseModel):
    source: str
    dim_m: int
    dim_h: int
    d_n: int
    euler: int
    is_hamiltonian: bool
    pi1_abelian: bool
    h1: H1Model
    betti1: int
    theta_rank: int
    chern_forms: list[list[list[str]]]
    dim_moduli: DimModuliModel
    aut_image_dim: int
    nu_nondegenerate: bool
    splitting: SplittingModel


class CompareModel(BaseModel):
    first: str
    second: str
    equal: bool


class DecompositionModel(BaseModel):
    lineality: list[list[str]]
    coordinates: list[int]
    forms: list[list[str]]
    offsets: list[str]
    compact: bool
    cocompact: bool
    vertices: list[list[str]]


# --- Conversion ---


def _vertex_model(report: VertexReport) -> VertexModel:
    return VertexModel(
        vertex=_q(report.vertex),
        simple=report.simple,
        edges=[list(e) for e in report.edges],
        edge_determinant=report.edge_determinant,
    )


def validation_model(report: ValidationReport) -> ValidationModel:
    rejection = report.delzant_certificate.first_rejection() if report.delzant_certificate else None
    return ValidationModel(
        passed=report.passed,
        antisymmetric=report.antisymmetric,
        contained=report.contained,
        delzant=report.delzant,
        centered=report.centered,
        rank=report.rank,
        integral=report.integral,
        cyclic=report.cyclic,
        hom_c=report.hom_c,
        homomorphic=report.homomorphic,
        delzant_rejection=_vertex_model(rejection) if rejection else None,
        offending_pair=list(report.offending_pair) if report.offending_pair else None,
        offending_triple=list(report.offending_triple) if report.offending_triple else None,
        cyclic_value=str(report.cyclic_value) if report.cyclic_value is not None else None,
        hom_c_violation=[list(z) for z in report.hom_c_violation] if report.hom_c_violation else None,
        notes=list(report.notes),
    )


def splitting_model(result: SplittingResult) -> SplittingModel:
    if result.feasible:
        return SplittingModel(
            feasible=True,
            complement=[list(b) for b in result.t_f.basis] if result.t_f else None,
            shift=_matrix(result.shift) if result.shift is not None else None,
        )
    ob = result.obstruction
    terms = " + ".join(f"{b}*m[{ob.coordinate},{j + 1}]" for j, b in enumerate(ob.b) if b) or "0"
    return SplittingModel(
        feasible=False,
        obstruction_pair=list(ob.pair),
        obstruction_coordinate=ob.coordinate,
        obstruction_equation=f"{terms} = {ob.a}",
    )


def invariant_model(source: str, report: InvariantReport) -> InvariantModel:
    dm = report.dim_moduli
    return InvariantModel(
        source=source,
        dim_m=report.dim_m,
        dim_h=report.dim_h,
        d_n=report.d_n,
        euler=report.euler,
        is_hamiltonian=report.is_hamiltonian,
        pi1_abelian=report.pi1_abelian,
        h1=H1Model(torsion=list(report.h1.torsion), free_rank=report.h1.free_rank),
        betti1=report.betti1,
        theta_rank=report.theta_rank,
        chern_forms=[_matrix(m) for m in report.chern_forms],
        dim_moduli=DimModuliModel(
            direct=dm.direct,
            formula_crosscheck=dm.formula_crosscheck,
            stated_formula=dm.stated_formula,
            corrected_formula=dm.corrected_formula,
        ),
        aut_image_dim=report.aut_image_dim,
        nu_nondegenerate=report.nu_nondegenerate,
        splitting=splitting_model(report.splitting),
    )


def decomposition_model(dec: Decomposition) -> DecompositionModel:
    return DecompositionModel(
        lineality=[_q(v) for v in dec.lineality.basis],
        coordinates=[k + 1 for k in dec.coordinates],
        forms=[_q(h.normal) for h in dec.delta.constraints],
        offsets=[str(h.offset) for h in dec.delta.constraints],
        compact=dec.compact,
        cocompact=dec.cocompact,
        vertices=[_q(v) for v in dec.vertices],
    )


# --- Text rendering ---


def _render(value: Any, indent: int, lines: list[str], key: str) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        lines.append(f"{pad}{key}:")
        for k, v in value.items():
            _render(v, indent + 1, lines, k)
    elif isinstance(value, list) and any(isinstance(v, dict) for v in value):
        lines.append(f"{pad}{key}:")
        for i, v in enumerate(value, 1):
            _render(v, indent + 1, lines, f"[{i}]")
    else:
        lines.append(f"{pad}{key}: {_inline(value)}")


def _inline(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return "[" + ", ".join(_inline(v) for v in value) + "]"
    return str(value)


def render_text(model: BaseModel) -> str:
    lines: list[str] = []
    for key, value in model.model_dump().items():
        _render(value, 0, lines, key)
    return "\n".join(lines) + "\n"


def render_json(model: BaseModel) -> str:
    return model.model_dump_json(indent=2) + "\n"
