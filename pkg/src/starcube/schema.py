"""Star-schema catalog: dimensions, hierarchies, facts, measures, cubes.

Catalogs are immutable after construction and validated as a whole; all
names are case-insensitive within their namespace. The catalog document
form is JSON with top-level keys ``dimensions``, ``facts``, ``cubes``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CatalogError
from .values import ValueKind


class Aggregator(str, enum.Enum):
    SUM = "SUM"
    COUNT = "COUNT"
    MIN = "MIN"
    MAX = "MAX"
    AVG = "AVG"


class ScdType(str, enum.Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"


ALL_LEVEL = "(All)"
ALL_KEY = "All"


def ci(name: str) -> str:
    """Case-insensitive namespace key."""
    return name.casefold()


@dataclass(frozen=True)
class Violation:
    kind: str          # DuplicateName | UnknownReference | EmptyHierarchy
    element: str       # offending element name
    message: str

    def __str__(self) -> str:
        return f"{self.kind}({self.element}): {self.message}"


@dataclass(frozen=True)
class LevelDef:
    name: str
    source_attribute: str


@dataclass(frozen=True)
class HierarchyDef:
    name: str
    levels: tuple[LevelDef, ...]      # coarsest -> finest
    has_all: bool = True

    def level_names(self) -> list[str]:
        """Level names including the implicit (All) level at index 0."""
        return [ALL_LEVEL] + [lv.name for lv in self.levels]


@dataclass(frozen=True)
class AttributeDef:
    name: str
    kind: ValueKind


@dataclass(frozen=True)
class DimensionDef:
    name: str
    natural_key: str
    attributes: tuple[AttributeDef, ...]
    hierarchies: tuple[HierarchyDef, ...]
    scd_policy: dict = field(default_factory=dict)   # attribute -> ScdType

    def attribute(self, name: str) -> AttributeDef | None:
        wanted = ci(name)
        for attr in self.attributes:
            if ci(attr.name) == wanted:
                return attr
        return None

    def hierarchy(self, name: str) -> HierarchyDef | None:
        wanted = ci(name)
        for hier in self.hierarchies:
            if ci(hier.name) == wanted:
                return hier
        return None

    def scd_type(self, attribute: str) -> ScdType:
        for attr, scd in self.scd_policy.items():
            if ci(attr) == ci(attribute):
                return scd
        return ScdType.TYPE1

    def type2_attributes(self) -> set[str]:
        return {ci(a) for a, s in self.scd_policy.items() if s is ScdType.TYPE2}


@dataclass(frozen=True)
class MeasureDef:
    name: str
    source_column: str
    aggregator: Aggregator
    kind: ValueKind


@dataclass(frozen=True)
class DimensionRole:
    role: str
    dimension: str


@dataclass(frozen=True)
class FactDef:
    name: str
    roles: tuple[DimensionRole, ...]
    measures: tuple[MeasureDef, ...]

    def role(self, name: str) -> DimensionRole | None:
        wanted = ci(name)
        for r in self.roles:
            if ci(r.role) == wanted:
                return r
        return None

    def measure(self, name: str) -> MeasureDef | None:
        wanted = ci(name)
        for m in self.measures:
            if ci(m.name) == wanted:
                return m
        return None


@dataclass(frozen=True)
class CubeDef:
    name: str
    fact: str
    included_roles: tuple[str, ...]
    included_measures: tuple[str, ...]


@dataclass(frozen=True)
class SchemaCatalog:
    dimensions: tuple[DimensionDef, ...]
    facts: tuple[FactDef, ...]
    cubes: tuple[CubeDef, ...]
    version: int = 1

    def dimension(self, name: str) -> DimensionDef | None:
        wanted = ci(name)
        for dim in self.dimensions:
            if ci(dim.name) == wanted:
                return dim
        return None

    def fact(self, name: str) -> FactDef | None:
        wanted = ci(name)
        for fct in self.facts:
            if ci(fct.name) == wanted:
                return fct
        return None

    def cube(self, name: str) -> CubeDef | None:
        wanted = ci(name)
        for cb in self.cubes:
            if ci(cb.name) == wanted:
                return cb
        return None


# --- validation ----------------------------------------------------------------

def _dupes(names, kind, scope, out):
    seen = {}
    for name in names:
        key = ci(name)
        if key in seen:
            out.append(Violation("DuplicateName", name,
                                 f"duplicate {kind} name in {scope}"))
        seen[key] = name


def validate_catalog(catalog: SchemaCatalog) -> list[Violation]:
    """Return every invariant violation, ordered by (element, kind)."""
    out: list[Violation] = []

    _dupes([d.name for d in catalog.dimensions], "dimension", "catalog", out)
    _dupes([f.name for f in catalog.facts], "fact", "catalog", out)
    _dupes([c.name for c in catalog.cubes], "cube", "catalog", out)

    for dim in catalog.dimensions:
        _dupes([a.name for a in dim.attributes], "attribute", dim.name, out)
        _dupes([h.name for h in dim.hierarchies], "hierarchy", dim.name, out)
        if dim.attribute(dim.natural_key) is None:
            out.append(Violation("UnknownReference", dim.natural_key,
                                 f"natural key of {dim.name} is not a declared attribute"))
        if not dim.hierarchies:
            out.append(Violation("EmptyHierarchy", dim.name,
                                 "dimension declares no hierarchy"))
        for attr in dim.scd_policy:
            if dim.attribute(attr) is None:
                out.append(Violation("UnknownReference", attr,
                                     f"scd_policy of {dim.name} names a missing attribute"))
        for hier in dim.hierarchies:
            if not hier.levels:
                out.append(Violation("EmptyHierarchy", hier.name,
                                     f"hierarchy of {dim.name} has no levels"))
            _dupes([lv.name for lv in hier.levels], "level",
                   f"{dim.name}.{hier.name}", out)
            for level in hier.levels:
                if dim.attribute(level.source_attribute) is None:
                    out.append(Violation(
                        "UnknownReference", level.source_attribute,
                        f"level {hier.name}.{level.name} of {dim.name} "
                        f"sources a missing attribute"))

    for fact in catalog.facts:
        _dupes([r.role for r in fact.roles], "role", fact.name, out)
        _dupes([m.name for m in fact.measures], "measure", fact.name, out)
        if not fact.roles:
            out.append(Violation("UnknownReference", fact.name,
                                 "fact declares no dimension role"))
        if not fact.measures:
            out.append(Violation("UnknownReference", fact.name,
                                 "fact declares no measure"))
        for role in fact.roles:
            if catalog.dimension(role.dimension) is None:
                out.append(Violation("UnknownReference", role.dimension,
                                     f"role {role.role} of {fact.name} references "
                                     f"a missing dimension"))
        for measure in fact.measures:
            if measure.kind not in (ValueKind.INTEGER, ValueKind.DECIMAL):
                out.append(Violation("UnknownReference", measure.name,
                                     "measure kind must be integer or decimal"))

    for cube in catalog.cubes:
        fact = catalog.fact(cube.fact)
        if fact is None:
            out.append(Violation("UnknownReference", cube.fact,
                                 f"cube {cube.name} references a missing fact"))
            continue
        for role_name in cube.included_roles:
            if fact.role(role_name) is None:
                out.append(Violation("UnknownReference", role_name,
                                     f"cube {cube.name} includes a role missing "
                                     f"from {fact.name}"))
        for measure_name in cube.included_measures:
            if fact.measure(measure_name) is None:
                out.append(Violation("UnknownReference", measure_name,
                                     f"cube {cube.name} includes a measure missing "
                                     f"from {fact.name}"))

    out.sort(key=lambda v: (ci(v.element), v.kind, v.message))
    return out


# --- document form ---------------------------------------------------------------

def catalog_to_dict(catalog: SchemaCatalog) -> dict:
    return {
        "version": catalog.version,
        "dimensions": [
            {
                "name": d.name,
                "natural_key": d.natural_key,
                "attributes": [{"name": a.name, "kind": a.kind.value}
                               for a in d.attributes],
                "hierarchies": [
                    {
                        "name": h.name,
                        "has_all": h.has_all,
                        "levels": [{"name": lv.name,
                                    "source_attribute": lv.source_attribute}
                                   for lv in h.levels],
                    }
                    for h in d.hierarchies
                ],
                "scd_policy": {a: s.value for a, s in d.scd_policy.items()},
            }
            for d in catalog.dimensions
        ],
        "facts": [
            {
                "name": f.name,
                "roles": [{"role": r.role, "dimension": r.dimension}
                          for r in f.roles],
                "measures": [
                    {"name": m.name, "source_column": m.source_column,
                     "aggregator": m.aggregator.value, "kind": m.kind.value}
                    for m in f.measures
                ],
            }
            for f in catalog.facts
        ],
        "cubes": [
            {"name": c.name, "fact": c.fact,
             "included_roles": list(c.included_roles),
             "included_measures": list(c.included_measures)}
            for c in catalog.cubes
        ],
    }


def _catalog_from_dict(doc: dict) -> SchemaCatalog:
    try:
        dimensions = tuple(
            DimensionDef(
                name=d["name"],
                natural_key=d["natural_key"],
                attributes=tuple(AttributeDef(a["name"], ValueKind(a["kind"]))
                                 for a in d["attributes"]),
                hierarchies=tuple(
                    HierarchyDef(
                        name=h["name"],
                        levels=tuple(LevelDef(lv["name"], lv["source_attribute"])
                                     for lv in h["levels"]),
                        has_all=h.get("has_all", True),
                    )
                    for h in d["hierarchies"]
                ),
                scd_policy={a: ScdType(s)
                            for a, s in d.get("scd_policy", {}).items()},
            )
            for d in doc.get("dimensions", [])
        )
        facts = tuple(
            FactDef(
                name=f["name"],
                roles=tuple(DimensionRole(r["role"], r["dimension"])
                            for r in f["roles"]),
                measures=tuple(
                    MeasureDef(m["name"], m["source_column"],
                               Aggregator(m["aggregator"]), ValueKind(m["kind"]))
                    for m in f["measures"]
                ),
            )
            for f in doc.get("facts", [])
        )
        cubes = tuple(
            CubeDef(c["name"], c["fact"],
                    tuple(c["included_roles"]), tuple(c["included_measures"]))
            for c in doc.get("cubes", [])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CatalogError([Violation("UnknownReference", "document",
                                      f"malformed catalog document: {exc}")])
    return SchemaCatalog(dimensions=dimensions, facts=facts, cubes=cubes,
                         version=int(doc.get("version", 1)))


def define_catalog(spec) -> SchemaCatalog:
    """Build and validate a catalog from its document form.

    ``spec`` may be a dict, JSON text, or a path to a JSON file. Raises
    CatalogError carrying every violation if validation fails.
    """
    if isinstance(spec, (str, Path)):
        path = Path(spec)
        if isinstance(spec, Path) or path.suffix == ".json" or path.exists():
            doc = json.loads(path.read_text(encoding="utf-8"))
        else:
            doc = json.loads(spec)
    else:
        doc = spec
    catalog = _catalog_from_dict(doc)
    violations = validate_catalog(catalog)
    if violations:
        raise CatalogError(violations)
    return catalog


def load_catalog(path) -> SchemaCatalog:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    catalog = _catalog_from_dict(doc)
    violations = validate_catalog(catalog)
    if violations:
        raise CatalogError(violations)
    return catalog


# --- built-in cancer warehouse catalog -------------------------------------------

AGE_BANDS = ("0-17", "18-39", "40-59", "60+")

PROCEDURE_TYPES = ("medical tests", "rays")
TREATMENT_KINDS = ("Chemotherapy", "Hormonal Therapy", "Immunotherapy",
                   "Radiotherapy", "Surgery")


def reference_schema() -> SchemaCatalog:
    """The built-in cancer warehouse: FactMedical over four dimensions,
    with DimDate playing three date roles."""
    s = ValueKind.STRING
    dim_patient = DimensionDef(
        name="DimPatient",
        natural_key="patient_id",
        attributes=(
            AttributeDef("patient_id", s),
            AttributeDef("name", s),
            AttributeDef("gender", s),
            AttributeDef("age", ValueKind.INTEGER),
            AttributeDef("age_band", s),
            AttributeDef("address", s),
            AttributeDef("phone", s),
            AttributeDef("hio_law", s),
        ),
        hierarchies=(
            HierarchyDef("Gender", (LevelDef("Gender", "gender"),)),
            HierarchyDef("AgeBand", (LevelDef("AgeBand", "age_band"),)),
            HierarchyDef("HioLaw", (LevelDef("HioLaw", "hio_law"),)),
        ),
        scd_policy={"address": ScdType.TYPE2, "hio_law": ScdType.TYPE2},
    )
    dim_procedure = DimensionDef(
        name="DimProcedure",
        natural_key="procedure_id",
        attributes=(
            AttributeDef("procedure_id", s),
            AttributeDef("name", s),
            AttributeDef("procedure_type", s),
        ),
        hierarchies=(
            HierarchyDef("ByType", (LevelDef("ProcedureType", "procedure_type"),
                                    LevelDef("Procedure", "name"))),
        ),
    )
    dim_treatment = DimensionDef(
        name="DimTreatment",
        natural_key="treatment_id",
        attributes=(
            AttributeDef("treatment_id", s),
            AttributeDef("name", s),
            AttributeDef("kind", s),
            AttributeDef("disease", s),
        ),
        hierarchies=(
            HierarchyDef("Therapy", (LevelDef("Disease", "disease"),
                                     LevelDef("TreatmentKind", "kind"),
                                     LevelDef("Treatment", "name"))),
        ),
    )
    dim_date = DimensionDef(
        name="DimDate",
        natural_key="date",
        attributes=(
            AttributeDef("date", ValueKind.DATE),
            AttributeDef("year", ValueKind.INTEGER),
            AttributeDef("quarter", s),
            AttributeDef("month", s),
        ),
        hierarchies=(
            HierarchyDef("Calendar", (LevelDef("Year", "year"),
                                      LevelDef("Quarter", "quarter"),
                                      LevelDef("Month", "month"),
                                      LevelDef("Day", "date"))),
        ),
    )
    fact_medical = FactDef(
        name="FactMedical",
        roles=(
            DimensionRole("PaID", "DimPatient"),
            DimensionRole("ProID", "DimProcedure"),
            DimensionRole("TrID", "DimTreatment"),
            DimensionRole("DiagnoseDate", "DimDate"),
            DimensionRole("ProcedureDate", "DimDate"),
            DimensionRole("TreatmentDate", "DimDate"),
        ),
        measures=(
            MeasureDef("Cost", "Cost", Aggregator.SUM, ValueKind.DECIMAL),
            MeasureDef("Quantity", "Quantity", Aggregator.SUM, ValueKind.INTEGER),
        ),
    )
    cube = CubeDef(
        name="Cancer",
        fact="FactMedical",
        included_roles=tuple(r.role for r in fact_medical.roles),
        included_measures=tuple(m.name for m in fact_medical.measures),
    )
    return SchemaCatalog(
        dimensions=(dim_patient, dim_procedure, dim_treatment, dim_date),
        facts=(fact_medical,),
        cubes=(cube,),
    )


def age_band(age: int) -> str:
    """Band a raw age: 0-17, 18-39, 40-59, 60+."""
    if age < 18:
        return AGE_BANDS[0]
    if age < 40:
        return AGE_BANDS[1]
    if age < 60:
        return AGE_BANDS[2]
    return AGE_BANDS[3]
