"""Data selection: code family grouping, readmission labeling, cohort filtering.

All transformations are pure and deterministic; records are grouped per
patient internally so the results do not depend on input order.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace

from . import icd9
from .cohort import AdmissionRecord
from .exceptions import ConfigurationError, ValidationError


@dataclass(frozen=True)
class PreprocessConfig:
    # Family codes for heart failure (428) and cardiac dysrhythmias (427).
    window_days: int = 30
    cohort_codes: frozenset = field(default_factory=lambda: frozenset({"427", "428"}))

    def validate(self) -> "PreprocessConfig":
        if self.window_days < 1 or int(self.window_days) != self.window_days:
            raise ConfigurationError(f"window_days must be a positive integer, got {self.window_days!r}")
        if not self.cohort_codes:
            raise ConfigurationError("cohort_codes must be non-empty")
        return self


def group_icd_code(code: str) -> str:
    """Return the family category of an ICD-9-like code (stem before the dot).

    Idempotent: family codes map to themselves.
    """
    if not isinstance(code, str) or not icd9.ICD9_CODE_RE.match(code):
        raise ValidationError(f"malformed ICD-9 code: {code!r}")
    return code.split(".", 1)[0]


def _group_code_list(pairs, table, admission_id, kind):
    families = {}
    for code, _ in pairs:
        family = group_icd_code(code)
        if family not in table:
            raise ValidationError(
                f"{admission_id}: {kind} family {family!r} missing from description table")
        families[family] = table[family]
    return sorted(families.items())


def group_records(records) -> list[AdmissionRecord]:
    """Replace every diagnosis/procedure code by its family category.

    Duplicate families within one admission are collapsed and descriptions
    are replaced by the bundled family descriptions.
    """
    out = []
    for record in records:
        out.append(replace(
            record,
            diagnoses=_group_code_list(record.diagnoses, icd9.DIAGNOSIS_FAMILIES,
                                       record.admission_id, "diagnosis"),
            procedures=_group_code_list(record.procedures, icd9.PROCEDURE_FAMILIES,
                                        record.admission_id, "procedure"),
        ))
    return out


def label_and_exclude(records, config: PreprocessConfig | None = None) -> list[AdmissionRecord]:
    """Attach readmission labels and drop records censored by death.

    A record is positive when the same patient's next admission starts
    within ``window_days`` of its discharge (inclusive).  A record is
    removed when the patient died during that admission or within
    ``window_days`` of its discharge.  The result is sorted by
    ``(patient_id, admit_day)`` so any input ordering yields the same set.
    """
    config = (config or PreprocessConfig()).validate()
    window = config.window_days

    per_patient = defaultdict(list)
    for record in records:
        per_patient[record.patient_id].append(record)

    out = []
    for patient_id in sorted(per_patient):
        stays = sorted(per_patient[patient_id], key=lambda r: r.admit_day)
        for earlier, later in zip(stays, stays[1:]):
            if later.admit_day <= earlier.discharge_day:
                raise ValidationError(
                    f"{patient_id}: overlapping admissions "
                    f"{earlier.admission_id} and {later.admission_id}")
        for i, record in enumerate(stays):
            if record.deceased_day is not None and \
                    record.deceased_day <= record.discharge_day + window:
                continue
            readmitted = (i + 1 < len(stays) and
                          stays[i + 1].admit_day - record.discharge_day <= window)
            out.append(replace(record, readmitted_within_window=readmitted))
    return out


def filter_cohort(records, config: PreprocessConfig | None = None) -> list[AdmissionRecord]:
    """Keep admissions whose diagnosis family set intersects the cohort codes."""
    config = (config or PreprocessConfig()).validate()
    kept = []
    for record in records:
        families = {code.split(".", 1)[0] for code, _ in record.diagnoses}
        if families & config.cohort_codes:
            kept.append(record)
    return kept


def preprocess_records(records, config: PreprocessConfig | None = None,
                       filter_to_cohort: bool = True) -> list[AdmissionRecord]:
    """Full preprocessing chain: group, label/exclude, optionally filter."""
    config = (config or PreprocessConfig()).validate()
    out = label_and_exclude(group_records(records), config)
    if filter_to_cohort:
        out = filter_cohort(out, config)
    return out


_SUMMARY_FACETS = [
    ("gender", lambda r: r.gender is None),
    ("religion", lambda r: r.religion is None),
    ("marital status", lambda r: r.marital_status is None),
    ("race/ethnicity", lambda r: r.ethnicity is None),
    ("diseases/diagnoses", lambda r: not r.diagnoses),
    ("medication", lambda r: not r.medications),
    ("procedures", lambda r: not r.procedures),
    ("employment", lambda r: r.employment is None),
    ("housing conditions", lambda r: r.housing is None),
    ("household composition", lambda r: r.household is None),
]


def summarize_records(records) -> str:
    """Plain-text summary: totals, label counts, per-facet missingness."""
    total = len(records)
    positives = sum(1 for r in records if r.readmitted_within_window)
    labeled = sum(1 for r in records if r.readmitted_within_window is not None)
    lines = [
        f"total admissions: {total}",
        f"labeled: {labeled}  positive: {positives}  negative: {labeled - positives}",
        "",
        f"{'information':<24} {'records with missing information':>36}",
    ]
    for name, is_missing in _SUMMARY_FACETS:
        count = sum(1 for r in records if is_missing(r))
        pct = 100.0 * count / total if total else 0.0
        lines.append(f"{name:<24} {f'{count:,} ({pct:.2f}%)':>36}")
    return "\n".join(lines) + "\n"
