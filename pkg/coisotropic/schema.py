"""
JSON documents for ingredient lists and polyhedral orbit spaces.

Rationals travel as strings "p/q" or "n" (plain JSON integers are accepted
on input). Unknown fields are rejected.
"""

import json
import logging
from fractions import Fraction
from typing import Annotated, Any

from pydantic import (
    AfterValidator,
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    ValidationError,
    ValidationInfo,
    field_validator,
    model_validator,
)

from coisotropic.errors import SchemaError
from coisotropic.exact_linalg import IntegerLattice, QMatrix
from coisotropic.ingredients import IngredientList, canonicalize

logger = logging.getLogger(__name__)


def _to_text(value: Any) -> Any:
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return str(value)
    return value


def _check_rational(value: str) -> str:
    try:
        Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{value!r} is not an exact rational") from None
    if "." in value or "e" in value.lower():
        raise ValueError(f"{value!r} must be written as p/q or n")
    return str(Fraction(value))


RationalText = Annotated[str, BeforeValidator(_to_text), AfterValidator(_check_rational)]


class CEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    i: int = Field(ge=1)
    j: int = Field(ge=1)
    value: list[RationalText]


class IngredientDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    torus_dim: int = Field(ge=0)
    sigma_t: list[list[RationalText]]
    t_h_lattice: list[list[int]]
    delta_vertices: list[list[RationalText]]
    p_basis: list[list[int]]
    c: list[CEntry]
    tau: list[list[RationalText]]

    @field_validator("sigma_t")
    @classmethod
    def check_sigma(cls, rows: list[list[str]], info: ValidationInfo) -> list[list[str]]:
        d = info.data.get("torus_dim")
        if d is None:
            return rows
        if len(rows) != d or any(len(row) != d for row in rows):
            raise ValueError(f"sigma_t must be a {d}x{d} matrix")
        if not QMatrix.from_rows(rows, d).is_antisymmetric():
            raise ValueError("sigma_t must be antisymmetric")
        return rows

    @field_validator("t_h_lattice")
    @classmethod
    def check_lattice(cls, columns: list[list[int]], info: ValidationInfo) -> list[list[int]]:
        d = info.data.get("torus_dim")
        if d is None:
            return columns
        if any(len(col) != d for col in columns):
            raise ValueError(f"t_h_lattice columns must have {d} entries")
        lattice = IntegerLattice.span(columns, d)
        if lattice.rank != len(columns):
            raise ValueError("t_h_lattice columns must be linearly independent")
        if not lattice.is_saturated():
            raise ValueError("t_h_lattice must span a saturated lattice")
        return columns

    @model_validator(mode="after")
    def check_shapes(self) -> "IngredientDocument":
        d = self.torus_dim
        dim_h = len(self.t_h_lattice)
        if dim_h == 0 and self.delta_vertices == []:
            self.delta_vertices = [[]]
        if any(len(v) != dim_h for v in self.delta_vertices):
            raise ValueError(f"delta_vertices must have {dim_h} coordinates each")
        n = len(self.p_basis)
        dim_l = d - QMatrix.from_rows(self.sigma_t, d).rank()
        seen = set()
        for entry in self.c:
            if not entry.i < entry.j <= n:
                raise ValueError(f"c entry ({entry.i}, {entry.j}) needs 1 <= i < j <= {n}")
            if (entry.i, entry.j) in seen:
                raise ValueError(f"c entry ({entry.i}, {entry.j}) given twice")
            if len(entry.value) != dim_l:
                raise ValueError(
                    f"c entry ({entry.i}, {entry.j}) has {len(entry.value)} coordinates, the kernel of sigma_t has {dim_l}"
                )
            seen.add((entry.i, entry.j))
        if len(self.tau) != n:
            raise ValueError(f"tau must hold one value per p_basis row ({n}), got {len(self.tau)}")
        for t in self.tau:
            if len(t) != d:
                raise ValueError(f"tau values must have {d} coordinates")
            if any(not 0 <= Fraction(x) < 1 for x in t):
                raise ValueError("tau coordinates must lie in [0, 1)")
        return self

    def to_ingredients(self) -> IngredientList:
        return IngredientList.create(
            sigma_t=self.sigma_t,
            t_h=self.t_h_lattice,
            delta_vertices=self.delta_vertices,
            p_basis=self.p_basis,
            c={(e.i - 1, e.j - 1): e.value for e in self.c},
            tau=self.tau,
        )

    @classmethod
    def from_ingredients(cls, lst: IngredientList) -> "IngredientDocument":
        n = lst.d_n
        return cls(
            torus_dim=lst.d,
            sigma_t=[[str(x) for x in row] for row in lst.sigma_t.to_rows()],
            t_h_lattice=[list(b) for b in lst.t_h.basis],
            delta_vertices=[[str(x) for x in v] for v in lst.delta.vertices],
            p_basis=[list(p) for p in lst.p_basis],
            c=[
                CEntry(i=i + 1, j=j + 1, value=[str(x) for x in lst.c_l(i, j)])
                for i in range(n)
                for j in range(i + 1, n)
                if any(lst.c_l(i, j))
            ],
            tau=[[str(x) for x in t.coords] for t in lst.tau_values],
        )


class OrbitSpaceDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    ambient_dim: int = Field(ge=0)
    forms: list[list[RationalText]]
    offsets: list[RationalText]
    periods: list[list[RationalText]] = []

    @model_validator(mode="after")
    def check_shapes(self) -> "OrbitSpaceDocument":
        n = self.ambient_dim
        if len(self.forms) != len(self.offsets):
            raise ValueError("forms and offsets must have the same length")
        for f in self.forms:
            if len(f) != n:
                raise ValueError(f"forms must have {n} coordinates")
            if not any(Fraction(x) for x in f):
                raise ValueError("constraint forms must be nonzero")
        for p in self.periods:
            if len(p) != n:
                raise ValueError(f"periods must have {n} coordinates")
        if self.periods and QMatrix.from_rows(self.periods, n).rank() != len(self.periods):
            raise ValueError("periods must be linearly independent")
        return self


# --- Text I/O ---


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, line=exc.lineno) from None


def _schema_error(exc: ValidationError) -> SchemaError:
    first = exc.errors()[0]
    loc = ".".join(str(p) for p in first["loc"])
    return SchemaError(first["msg"], field=loc or None)


def load_document(text: str) -> IngredientDocument | OrbitSpaceDocument:
    """Parse either document kind, told apart by their required keys."""
    data = _load_json(text)
    model = OrbitSpaceDocument if isinstance(data, dict) and "forms" in data else IngredientDocument
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise _schema_error(exc) from None


def parse(text: str) -> IngredientList:
    data = _load_json(text)
    try:
        doc = IngredientDocument.model_validate(data)
    except ValidationError as exc:
        raise _schema_error(exc) from None
    logger.debug("Parsed ingredient list on a torus of dimension %d", doc.torus_dim)
    return doc.to_ingredients()


def serialize(lst: IngredientList) -> str:
    """Canonical JSON text of the list."""
    return IngredientDocument.from_ingredients(canonicalize(lst)).model_dump_json(indent=2) + "\n"


def parse_orbit_space(text: str) -> OrbitSpaceDocument:
    data = _load_json(text)
    try:
        return OrbitSpaceDocument.model_validate(data)
    except ValidationError as exc:
        raise _schema_error(exc) from None
