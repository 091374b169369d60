"""Deterministic synthetic source generator with a ground-truth manifest.

Emits the four operational CSVs (patients, procedures, treatments, facts)
plus ``manifest.json`` recording every clean value, every injected typo,
and the exact aggregate totals the loaded warehouse must reproduce.
Typos are single character edits, injected only into values of length >= 5
so the 0.8-similarity recovery bound holds, and each one is verified to
fuzzy-match back to its original before it is emitted.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import random
import string
from decimal import Decimal
from pathlib import Path

from ..schema import TREATMENT_KINDS, catalog_to_dict, reference_schema
from .fuzzy import fuzzy_match

GENDERS = ("Male", "Female")

HIO_LAWS = ("Law 32 Employees", "Law 79 Pensioners", "Law 99 Students",
            "Ministerial Decree 380")

PROCEDURES = (
    ("Chest X-Ray", "rays"), ("CT Scan", "rays"), ("MRI Scan", "rays"),
    ("Mammography", "rays"), ("Bone Scan", "rays"), ("Ultrasound", "rays"),
    ("PET Scan", "rays"), ("Radiograph Series", "rays"),
    ("Urine Test", "medical tests"), ("Complete Blood Count", "medical tests"),
    ("Tumor Marker Panel", "medical tests"), ("Biopsy Analysis", "medical tests"),
    ("Liver Function Test", "medical tests"),
    ("Kidney Function Test", "medical tests"),
    ("Blood Sugar Test", "medical tests"), ("Hormone Assay", "medical tests"),
)

DISEASES = ("Breast Cancer", "Colon Cancer", "Leukemia", "Lung Cancer",
            "Lymphoma", "Prostate Cancer")

TREATMENTS = (
    ("Cisplatin Course", "Chemotherapy", "Lung Cancer"),
    ("Carboplatin Course", "Chemotherapy", "Breast Cancer"),
    ("Fluorouracil Course", "Chemotherapy", "Colon Cancer"),
    ("Cytarabine Course", "Chemotherapy", "Leukemia"),
    ("Doxorubicin Course", "Chemotherapy", "Lymphoma"),
    ("External Beam Session", "Radiotherapy", "Lung Cancer"),
    ("Brachytherapy Session", "Radiotherapy", "Prostate Cancer"),
    ("Whole Breast Irradiation", "Radiotherapy", "Breast Cancer"),
    ("Pelvic Irradiation", "Radiotherapy", "Colon Cancer"),
    ("Checkpoint Inhibitor", "Immunotherapy", "Lung Cancer"),
    ("Monoclonal Antibody", "Immunotherapy", "Lymphoma"),
    ("CAR-T Infusion", "Immunotherapy", "Leukemia"),
    ("Tamoxifen Regimen", "Hormonal Therapy", "Breast Cancer"),
    ("Androgen Blockade", "Hormonal Therapy", "Prostate Cancer"),
    ("Lumpectomy", "Surgery", "Breast Cancer"),
    ("Colectomy", "Surgery", "Colon Cancer"),
    ("Lobectomy", "Surgery", "Lung Cancer"),
    ("Prostatectomy", "Surgery", "Prostate Cancer"),
)

FIRST_NAMES = ("Ahmed", "Mona", "Omar", "Sara", "Khaled", "Laila", "Hassan",
               "Nour", "Tarek", "Dina", "Youssef", "Mariam", "Mostafa",
               "Huda", "Karim", "Aya", "Samir", "Rania", "Fathi", "Salma")
LAST_NAMES = ("Hassan", "Ibrahim", "Mahmoud", "Ali", "Saleh", "Fawzy",
              "Shaker", "Amin", "Zaki", "Nasser")
STREETS = ("El Horreya St", "El Nasr Rd", "Tahrir Sq", "Port Said St",
           "El Geish Ave", "Orabi St", "Saad Zaghloul St", "El Mahatta Rd")
CITIES = ("Zagazig", "Belbeis", "Minya El Qamh", "Abu Hammad", "Faqous",
          "Hehia")

PATIENT_HEADERS = ("رقم المريض", "اسم المريض", "الجنس", "السن",
                   "العنوان", "التليفون", "قانون التأمين")
PATIENT_RENAME = dict(zip(PATIENT_HEADERS,
                          ("patient_id", "name", "gender", "age", "address",
                           "phone", "hio_law")))
PROCEDURE_HEADERS = ("ProcedureID", "ProcedureName", "ProcedureType")
PROCEDURE_RENAME = dict(zip(PROCEDURE_HEADERS,
                            ("procedure_id", "name", "procedure_type")))
TREATMENT_HEADERS = ("TreatmentID", "TreatmentName", "TreatmentKind",
                     "DiseaseName")
TREATMENT_RENAME = dict(zip(TREATMENT_HEADERS,
                            ("treatment_id", "name", "kind", "disease")))
FACT_HEADERS = ("PatientID", "ProcedureID", "TreatmentID", "DiagnoseDate",
                "ProcedureDate", "TreatmentDate", "Cost", "Quantity")
FACT_RENAME = dict(zip(FACT_HEADERS,
                       ("PaID", "ProID", "TrID", "DiagnoseDate",
                        "ProcedureDate", "TreatmentDate", "Cost", "Quantity")))

MIN_TYPO_LENGTH = 5

# (file, column) pairs eligible for typo injection, with their vocabularies.
def _vocab() -> dict:
    return {
        ("patients", "gender"): list(GENDERS),
        ("patients", "hio_law"): list(HIO_LAWS),
        ("procedures", "name"): [p[0] for p in PROCEDURES],
        ("procedures", "procedure_type"): sorted({p[1] for p in PROCEDURES}),
        ("treatments", "name"): [t[0] for t in TREATMENTS],
        ("treatments", "kind"): list(TREATMENT_KINDS),
        ("treatments", "disease"): list(DISEASES),
    }


def _one_edit(rng: random.Random, value: str) -> str:
    kind = rng.choice(("sub", "del", "ins"))
    pos = rng.randrange(len(value))
    ch = rng.choice(string.ascii_lowercase)
    if kind == "sub":
        return value[:pos] + ch + value[pos + 1:]
    if kind == "del":
        return value[:pos] + value[pos + 1:]
    return value[:pos] + ch + value[pos:]


def _inject_typo(rng: random.Random, value: str, vocab) -> str | None:
    """One verified-recoverable character edit, or None if none found."""
    for _ in range(30):
        candidate = _one_edit(rng, value)
        if candidate == value or candidate in vocab:
            continue
        hit = fuzzy_match(candidate, vocab, 0.8)
        if hit is not None and hit[0] == value:
            return candidate
    return None


def _money(cents: int) -> str:
    return str((Decimal(cents) / 100).quantize(Decimal("0.0001")))


class _Totals:
    __slots__ = ("cost_cents", "quantity", "rows")

    def __init__(self):
        self.cost_cents = 0
        self.quantity = 0
        self.rows = 0

    def add(self, cents: int, quantity: int) -> None:
        self.cost_cents += cents
        self.quantity += quantity
        self.rows += 1

    def to_dict(self) -> dict:
        return {"cost": _money(self.cost_cents), "quantity": self.quantity,
                "rows": self.rows}


def _write_csv(path: Path, headers, records) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(headers)
        writer.writerows(records)


def reference_pipeline_dict() -> dict:
    """The cancer pipeline over the generated sources (paths relative to
    the pipeline file)."""
    vocab = _vocab()
    return {
        "date_padding_days": 0,
        "sources": [
            {"name": "patients", "path": "patients.csv"},
            {"name": "procedures", "path": "procedures.csv"},
            {"name": "treatments", "path": "treatments.csv"},
            {"name": "facts", "path": "facts.csv"},
        ],
        "transforms": {
            "DimPatient": [
                {"op": "rename_columns", "map": PATIENT_RENAME},
                {"op": "convert_types", "map": {"age": "integer"}},
                {"op": "fuzzy_lookup", "column": "gender", "threshold": 0.8,
                 "reference_values": vocab[("patients", "gender")]},
                {"op": "fuzzy_lookup", "column": "hio_law", "threshold": 0.8,
                 "reference_values": vocab[("patients", "hio_law")]},
                {"op": "derive_column", "target": "age_band",
                 "rule": "age_band", "source": "age"},
            ],
            "DimProcedure": [
                {"op": "rename_columns", "map": PROCEDURE_RENAME},
                {"op": "fuzzy_lookup", "column": "procedure_type",
                 "threshold": 0.8,
                 "reference_values": vocab[("procedures", "procedure_type")]},
                {"op": "fuzzy_lookup", "column": "name", "threshold": 0.8,
                 "reference_values": vocab[("procedures", "name")]},
            ],
            "DimTreatment": [
                {"op": "rename_columns", "map": TREATMENT_RENAME},
                {"op": "fuzzy_lookup", "column": "kind", "threshold": 0.8,
                 "reference_values": vocab[("treatments", "kind")]},
                {"op": "fuzzy_lookup", "column": "disease", "threshold": 0.8,
                 "reference_values": vocab[("treatments", "disease")]},
                {"op": "fuzzy_lookup", "column": "name", "threshold": 0.8,
                 "reference_values": vocab[("treatments", "name")]},
            ],
            "FactMedical": [
                {"op": "rename_columns", "map": FACT_RENAME},
                {"op": "convert_types", "map": {
                    "DiagnoseDate": "date", "ProcedureDate": "date",
                    "TreatmentDate": "date", "Cost": "decimal",
                    "Quantity": "integer"}},
            ],
        },
        "loads": [
            {"source": "patients", "target": "DimPatient"},
            {"source": "procedures", "target": "DimProcedure"},
            {"source": "treatments", "target": "DimTreatment"},
            {"source": "facts", "target": "FactMedical",
             "late_arriving": "quarantine"},
        ],
    }


def generate_synthetic(seed: int, patients: int, facts: int, typo_rate: float,
                       out_dir, start: dt.date = dt.date(2009, 1, 1),
                       end: dt.date = dt.date(2012, 12, 31),
                       with_config: bool = False) -> dict:
    """Generate the four source CSVs and the ground-truth manifest.

    Deterministic for a given seed. ``typo_rate`` is the per-value chance
    that an eligible dimension-attribute value is perturbed by one
    character edit; every injected typo is recorded and guaranteed to
    fuzzy-match back to its clean form at threshold 0.8.
    """
    if patients <= 0 or facts <= 0:
        raise ValueError("patients and facts must be positive")
    if not 0.0 <= typo_rate <= 1.0:
        raise ValueError("typo_rate must be in [0, 1]")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    vocab = _vocab()
    typos: list = []

    def dirty(file: str, row_idx: int, column: str, value: str) -> str:
        if typo_rate <= 0.0 or len(value) < MIN_TYPO_LENGTH:
            return value
        if rng.random() >= typo_rate:
            return value
        candidate = _inject_typo(rng, value, vocab[(file, column)])
        if candidate is None:
            return value
        typos.append({"file": file, "row": row_idx, "column": column,
                      "clean": value, "typo": candidate})
        return candidate

    # --- clean dimension entities ---
    patient_rows = []
    for i in range(patients):
        pid = f"P-{i + 1:05d}"
        patient_rows.append({
            "patient_id": pid,
            "name": f"{rng.choice(FIRST_NAMES)} {rng.choice(LAST_NAMES)}",
            "gender": rng.choice(GENDERS),
            "age": rng.randrange(1, 91),
            "address": f"{rng.randrange(1, 200)} {rng.choice(STREETS)}, "
                       f"{rng.choice(CITIES)}",
            "phone": f"055-{rng.randrange(1000000, 10000000)}",
            "hio_law": rng.choice(HIO_LAWS),
        })
    procedure_rows = [{"procedure_id": f"PR-{i + 1:03d}", "name": name,
                       "procedure_type": ptype}
                      for i, (name, ptype) in enumerate(PROCEDURES)]
    treatment_rows = [{"treatment_id": f"T-{i + 1:03d}", "name": name,
                       "kind": kind, "disease": disease}
                      for i, (name, kind, disease) in enumerate(TREATMENTS)]

    # --- facts + running ground-truth totals ---
    start_ord, end_ord = start.toordinal(), end.toordinal()
    total = _Totals()
    per_gender: dict = {}
    per_year: dict = {}
    per_hio_law: dict = {}
    first_seen, last_seen = None, None

    fact_records = []
    for _ in range(facts):
        patient = patient_rows[rng.randrange(patients)]
        procedure = procedure_rows[rng.randrange(len(procedure_rows))]
        treatment = treatment_rows[rng.randrange(len(treatment_rows))]
        diagnose_ord = rng.randrange(start_ord, end_ord + 1)
        procedure_ord = min(diagnose_ord + rng.randrange(0, 31), end_ord)
        treatment_ord = min(procedure_ord + rng.randrange(0, 61), end_ord)
        cents = rng.randrange(2500, 400001)
        quantity = rng.randrange(1, 13)

        diagnose = dt.date.fromordinal(diagnose_ord)
        lo = min(diagnose_ord, procedure_ord, treatment_ord)
        hi = max(diagnose_ord, procedure_ord, treatment_ord)
        first_seen = lo if first_seen is None else min(first_seen, lo)
        last_seen = hi if last_seen is None else max(last_seen, hi)

        total.add(cents, quantity)
        per_gender.setdefault(patient["gender"], _Totals()).add(cents, quantity)
        per_year.setdefault(str(diagnose.year), _Totals()).add(cents, quantity)
        per_hio_law.setdefault(patient["hio_law"], _Totals()).add(cents, quantity)

        fact_records.append([
            patient["patient_id"], procedure["procedure_id"],
            treatment["treatment_id"], diagnose.isoformat(),
            dt.date.fromordinal(procedure_ord).isoformat(),
            dt.date.fromordinal(treatment_ord).isoformat(),
            f"{cents // 100}.{cents % 100:02d}", str(quantity),
        ])

    # --- dirty copies for the CSVs ---
    patient_records = []
    for i, p in enumerate(patient_rows):
        patient_records.append([
            p["patient_id"], p["name"], dirty("patients", i, "gender", p["gender"]),
            str(p["age"]), p["address"], p["phone"],
            dirty("patients", i, "hio_law", p["hio_law"]),
        ])
    procedure_records = []
    for i, p in enumerate(procedure_rows):
        procedure_records.append([
            p["procedure_id"], dirty("procedures", i, "name", p["name"]),
            dirty("procedures", i, "procedure_type", p["procedure_type"]),
        ])
    treatment_records = []
    for i, t in enumerate(treatment_rows):
        treatment_records.append([
            t["treatment_id"], dirty("treatments", i, "name", t["name"]),
            dirty("treatments", i, "kind", t["kind"]),
            dirty("treatments", i, "disease", t["disease"]),
        ])

    _write_csv(out / "patients.csv", PATIENT_HEADERS, patient_records)
    _write_csv(out / "procedures.csv", PROCEDURE_HEADERS, procedure_records)
    _write_csv(out / "treatments.csv", TREATMENT_HEADERS, treatment_records)
    _write_csv(out / "facts.csv", FACT_HEADERS, fact_records)

    manifest = {
        "seed": seed,
        "patients": patients,
        "facts": facts,
        "typo_rate": typo_rate,
        "files": {"patients": "patients.csv", "procedures": "procedures.csv",
                  "treatments": "treatments.csv", "facts": "facts.csv"},
        "vocab": {f"{file}.{column}": sorted(values)
                  for (file, column), values in vocab.items()},
        "typos": typos,
        "calendar": {"first": dt.date.fromordinal(first_seen).isoformat(),
                     "last": dt.date.fromordinal(last_seen).isoformat()},
        "expected": {
            "fact_rows": total.rows,
            "total_cost": _money(total.cost_cents),
            "total_quantity": total.quantity,
            "per_gender": {k: v.to_dict() for k, v in sorted(per_gender.items())},
            "per_year": {k: v.to_dict() for k, v in sorted(per_year.items())},
            "per_hio_law": {k: v.to_dict()
                            for k, v in sorted(per_hio_law.items())},
        },
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
        encoding="utf-8")

    if with_config:
        (out / "catalog.json").write_text(
            json.dumps(catalog_to_dict(reference_schema()), indent=2,
                       ensure_ascii=False) + "\n", encoding="utf-8")
        (out / "pipeline.json").write_text(
            json.dumps(reference_pipeline_dict(), indent=2,
                       ensure_ascii=False) + "\n", encoding="utf-8")
    return manifest
