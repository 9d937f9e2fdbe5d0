"""Synthetic admission cohorts that structurally mimic a processed ICU dataset.

Every admission is one record.  Cohorts are pure functions of
``(CohortConfig, seed)``: identical inputs produce byte-identical JSONL
output.  Facet missingness follows a configurable per-facet profile whose
defaults match the published missingness rates of the reference dataset,
and an optional planted label signal makes desk-scale learnability checks
possible.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import icd9
from ._utils import derive_rng
from ._validation import check_fraction, check_non_negative, check_seed
from .exceptions import ConfigurationError, ValidationError

GENDERS = ["female", "male"]
MARITAL_STATUSES = ["married", "single", "divorced", "widowed", "separated"]
RELIGIONS = [
    "catholic", "protestant", "jewish", "muslim", "buddhist", "hindu",
    "orthodox christian",
]
ETHNICITIES = [
    "white", "black african american", "hispanic latino", "asian",
    "american indian alaska native", "middle eastern", "multiracial",
]
EMPLOYMENTS = ["employed", "unemployed", "retired", "disabled", "student"]
HOUSINGS = [
    "stable housing", "homeless", "marginal housing", "assisted living",
    "nursing facility",
]
HOUSEHOLDS = [
    "lives alone", "lives with spouse", "lives with family",
    "lives with roommate", "group home",
]

MEDICATIONS = [
    "acetaminophen", "albuterol", "allopurinol", "amiodarone", "amlodipine",
    "apixaban", "aspirin", "atorvastatin", "azithromycin", "calcium gluconate",
    "carvedilol", "ceftriaxone", "ciprofloxacin", "citalopram", "clopidogrel",
    "colchicine", "dabigatran", "digoxin", "diltiazem", "dopamine",
    "enoxaparin", "esmolol", "ezetimibe", "fentanyl", "furosemide",
    "gabapentin", "haloperidol", "heparin", "hydralazine",
    "hydrochlorothiazide", "insulin", "isosorbide", "labetalol",
    "levothyroxine", "lisinopril", "lorazepam", "losartan",
    "magnesium sulfate", "metformin", "metoprolol", "morphine",
    "nitroglycerin", "norepinephrine", "omeprazole", "oxycodone",
    "pantoprazole", "piperacillin tazobactam", "potassium chloride",
    "prednisone", "quetiapine", "rivaroxaban", "rosuvastatin", "sertraline",
    "simvastatin", "sodium bicarbonate", "spironolactone", "ticagrelor",
    "vancomycin", "vasopressin", "warfarin",
]

# Fine-grained subcode qualifiers appended below the family level, so that
# rare pre-grouping codes exist and family grouping has work to do.
_SUBCODE_QUALIFIERS = [
    "unspecified", "acute", "chronic", "recurrent", "initial episode",
    "late effect", "with complication", "without complication", "severe",
    "mild",
]

# The day window the gap model targets; the labeling stage re-derives labels
# from intervals, so this must match its default window.
DEFAULT_WINDOW_DAYS = 30

_FACET_FIELDS = {
    "religion": "religion",
    "marital_status": "marital_status",
    "ethnicity": "ethnicity",
    "medication": "medications",
    "procedures": "procedures",
    "employment": "employment",
    "housing": "housing",
    "household": "household",
}


@dataclass(frozen=True)
class MissingnessProfile:
    """Per-facet probability that a facet is absent from a record.

    Defaults reproduce the published missingness percentages of the
    processed reference dataset; gender is never blanked.
    """

    religion: float = 0.3469
    marital_status: float = 0.1877
    ethnicity: float = 0.0923
    medication: float = 0.1566
    procedures: float = 0.1174
    employment: float = 0.4977
    housing: float = 0.9696
    household: float = 0.8375

    def validate(self) -> "MissingnessProfile":
        for name in _FACET_FIELDS:
            check_fraction(getattr(self, name), f"missingness.{name}")
        return self

    @classmethod
    def zeros(cls) -> "MissingnessProfile":
        return cls(**{name: 0.0 for name in _FACET_FIELDS})

    @classmethod
    def from_dict(cls, rates: dict) -> "MissingnessProfile":
        unknown = set(rates) - set(_FACET_FIELDS)
        if unknown:
            raise ConfigurationError(f"unknown missingness facet(s): {sorted(unknown)}")
        return cls(**rates).validate()

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in _FACET_FIELDS}


@dataclass(frozen=True)
class PlantedSignal:
    """Logistic label signal over code families and medication names.

    The label probability of an admission is
    ``sigmoid(bias + sum of weights over present codes + gaussian noise)``.
    When a signal is configured it determines readmission structure, so
    ``CohortConfig.readmission_rate`` is ignored.
    """

    weights: dict = field(default_factory=dict)
    bias: float = 0.0
    noise_std: float = 0.0

    def validate(self) -> "PlantedSignal":
        check_non_negative(self.noise_std, "planted_signal.noise_std")
        for code, w in self.weights.items():
            if not math.isfinite(float(w)):
                raise ConfigurationError(f"weight for {code!r} is not finite")
        return self

    def logit(self, codes) -> float:
        return self.bias + sum(self.weights.get(c, 0.0) for c in codes)


@dataclass(frozen=True)
class CohortConfig:
    n_patients: int = 1000
    max_admissions_per_patient: int = 8
    readmission_rate: float = 0.092
    missingness: MissingnessProfile = field(default_factory=MissingnessProfile)
    planted_signal: PlantedSignal | None = None
    deceased_rate: float = 0.05
    seed: int = 0

    def validate(self) -> "CohortConfig":
        if self.n_patients < 0 or int(self.n_patients) != self.n_patients:
            raise ConfigurationError(f"n_patients must be a non-negative integer, got {self.n_patients!r}")
        if self.max_admissions_per_patient < 1:
            raise ConfigurationError("max_admissions_per_patient must be >= 1")
        check_fraction(self.readmission_rate, "readmission_rate")
        check_fraction(self.deceased_rate, "deceased_rate")
        check_seed(self.seed)
        self.missingness.validate()
        if self.planted_signal is not None:
            self.planted_signal.validate()
        return self


@dataclass
class AdmissionRecord:
    """One hospital admission with clinical, demographic, and social facets.

    Absent facets are ``None`` (or an empty list for the coded facets);
    in the JSONL encoding absence is expressed by key omission.
    """

    patient_id: str
    admission_id: str
    admit_day: int
    discharge_day: int
    age_years: int
    gender: str | None = None
    marital_status: str | None = None
    religion: str | None = None
    ethnicity: str | None = None
    employment: str | None = None
    housing: str | None = None
    household: str | None = None
    diagnoses: list = field(default_factory=list)
    procedures: list = field(default_factory=list)
    medications: list = field(default_factory=list)
    deceased_day: int | None = None
    readmitted_within_window: bool | None = None

    def validate(self) -> "AdmissionRecord":
        if self.discharge_day < self.admit_day:
            raise ValidationError(
                f"{self.admission_id}: discharge_day {self.discharge_day} precedes admit_day {self.admit_day}")
        if self.deceased_day is not None and self.deceased_day < self.admit_day:
            raise ValidationError(f"{self.admission_id}: deceased_day precedes admit_day")
        if self.age_years < 0:
            raise ValidationError(f"{self.admission_id}: negative age")
        for code, _ in list(self.diagnoses) + list(self.procedures):
            if not icd9.ICD9_CODE_RE.match(code):
                raise ValidationError(f"{self.admission_id}: malformed code {code!r}")
        return self

    def to_json_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if value is None or value == []:
                continue
            if f.name in ("diagnoses", "procedures"):
                value = [list(pair) for pair in value]
            out[f.name] = value
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "AdmissionRecord":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown record field(s): {sorted(unknown)}")
        kwargs = dict(data)
        for key in ("diagnoses", "procedures"):
            if key in kwargs:
                kwargs[key] = [tuple(pair) for pair in kwargs[key]]
        return cls(**kwargs)


def _zipf_probs(n: int, exponent: float = 1.05):
    ranks = np.arange(1, n + 1, dtype=float)
    weights = ranks ** -exponent
    return weights / weights.sum()


def _sample_codes(rng, ranking, probs, count, families):
    """Draw ``count`` distinct families, mostly with fine-grained subcodes."""
    count = min(count, len(ranking))
    idx = rng.choice(len(ranking), size=count, replace=False, p=probs)
    out = []
    for i in sorted(idx):
        family = ranking[i]
        desc = families[family]
        if rng.random() < 0.15:
            out.append((family, desc))
        else:
            sub = int(rng.integers(0, 10))
            out.append((f"{family}.{sub}", f"{desc} {_SUBCODE_QUALIFIERS[sub]}"))
    return out


def _sample_medications(rng, probs, count):
    count = min(count, len(MEDICATIONS))
    idx = rng.choice(len(MEDICATIONS), size=count, replace=False, p=probs)
    return [MEDICATIONS[i] for i in sorted(idx)]


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def generate_cohort(config: CohortConfig) -> list[AdmissionRecord]:
    """Generate a reproducible synthetic cohort of admission records.

    Without a planted signal, inter-admission gaps are drawn so that the
    post-labeling positive rate approximates ``config.readmission_rate``
    (the rate targets the default 30-day window).  With a planted signal,
    readmission structure follows the signal's label draws instead and the
    configured rate is ignored.  Deceased patients (at ``deceased_rate``)
    receive a single admission whose record the labeling stage excludes.
    """
    config.validate()
    if config.n_patients == 0:
        return []
    rng = derive_rng(config.seed, "cohort")

    diag_probs = _zipf_probs(len(icd9.DIAGNOSIS_RANKING))
    proc_probs = _zipf_probs(len(icd9.PROCEDURE_RANKING))
    med_probs = _zipf_probs(len(MEDICATIONS))

    def draw_admission_content():
        n_diag = 1 + min(int(rng.poisson(3.0)), 9)
        n_proc = 1 + min(int(rng.poisson(1.2)), 5)
        n_med = 1 + min(int(rng.poisson(2.5)), 8)
        diagnoses = _sample_codes(rng, icd9.DIAGNOSIS_RANKING, diag_probs,
                                  n_diag, icd9.DIAGNOSIS_FAMILIES)
        procedures = _sample_codes(rng, icd9.PROCEDURE_RANKING, proc_probs,
                                   n_proc, icd9.PROCEDURE_FAMILIES)
        medications = _sample_medications(rng, med_probs, n_med)
        return diagnoses, procedures, medications

    def draw_demographics():
        return {
            "gender": GENDERS[int(rng.integers(0, len(GENDERS)))],
            "age_years": int(np.clip(round(rng.normal(65, 16)), 18, 95)),
            "marital_status": MARITAL_STATUSES[int(rng.integers(0, len(MARITAL_STATUSES)))],
            "religion": RELIGIONS[int(rng.integers(0, len(RELIGIONS)))],
            "ethnicity": ETHNICITIES[int(rng.integers(0, len(ETHNICITIES)))],
            "employment": EMPLOYMENTS[int(rng.integers(0, len(EMPLOYMENTS)))],
            "housing": HOUSINGS[int(rng.integers(0, len(HOUSINGS)))],
            "household": HOUSEHOLDS[int(rng.integers(0, len(HOUSEHOLDS)))],
        }

    deceased = rng.random(config.n_patients) < config.deceased_rate
    signal = config.planted_signal

    if signal is None:
        # Plan admission counts first so the short-gap probability can be
        # solved exactly: rate = q * gaps / admissions.
        counts = np.ones(config.n_patients, dtype=int)
        if config.max_admissions_per_patient > 1:
            extra = rng.binomial(config.max_admissions_per_patient - 1, 0.35,
                                 size=config.n_patients)
            counts += extra
        counts[deceased] = 1
        alive_total = int(counts[~deceased].sum())
        alive_gaps = int((counts[~deceased] - 1).sum())
        if alive_gaps > 0:
            q_short = min(1.0, config.readmission_rate * alive_total / alive_gaps)
        else:
            q_short = 0.0
    else:
        counts = None
        q_short = None

    records: list[AdmissionRecord] = []
    for p in range(config.n_patients):
        patient_id = f"P{p:06d}"
        demo = draw_demographics()
        day = int(rng.integers(0, 60))
        j = 0
        while True:
            j += 1
            diagnoses, procedures, medications = draw_admission_content()
            stay = int(rng.integers(1, 15))
            record = AdmissionRecord(
                patient_id=patient_id,
                admission_id=f"A{p:06d}{j:02d}",
                admit_day=day,
                discharge_day=day + stay,
                diagnoses=diagnoses,
                procedures=procedures,
                medications=medications,
                **demo,
            )
            records.append(record)

            if deceased[p]:
                # Death during the admission or inside the follow-up window;
                # either way the labeling stage drops the record.
                if rng.random() < 0.5:
                    record.deceased_day = int(rng.integers(record.admit_day,
                                                           record.discharge_day + 1))
                else:
                    record.deceased_day = record.discharge_day + int(
                        rng.integers(0, DEFAULT_WINDOW_DAYS + 1))
                break

            if signal is not None:
                codes = [_family(c) for c, _ in diagnoses]
                codes += [_family(c) for c, _ in procedures]
                codes += list(medications)
                logit = signal.logit(codes)
                if signal.noise_std > 0:
                    logit += float(rng.normal(0.0, signal.noise_std))
                readmit = rng.random() < _sigmoid(logit)
                if readmit and j < config.max_admissions_per_patient:
                    gap = int(rng.integers(1, DEFAULT_WINDOW_DAYS + 1))
                    day = record.discharge_day + gap
                    continue
                break

            if j >= counts[p]:
                break
            if rng.random() < q_short:
                gap = int(rng.integers(1, DEFAULT_WINDOW_DAYS + 1))
            else:
                gap = int(rng.integers(DEFAULT_WINDOW_DAYS + 1, 366))
            day = record.discharge_day + gap

    records = apply_missingness(records, config.missingness,
                                derive_rng(config.seed, "missingness"))
    for record in records:
        record.validate()
    return records


def _family(code: str) -> str:
    return code.split(".", 1)[0]


def apply_missingness(records, profile: MissingnessProfile, seed) -> list[AdmissionRecord]:
    """Blank each facet independently with its configured probability.

    ``seed`` may be an integer or a ``numpy.random.Generator``.  Gender is
    never blanked.  Returns new records; the input list is not mutated.
    """
    profile.validate()
    rng = seed if hasattr(seed, "random") else derive_rng(check_seed(seed), "missingness")
    out = []
    for record in records:
        replacements = {}
        for facet, fname in _FACET_FIELDS.items():
            rate = getattr(profile, facet)
            if rng.random() < rate:
                replacements[fname] = [] if fname in ("medications", "procedures") else None
        out.append(dataclasses.replace(record, **replacements) if replacements else
                   dataclasses.replace(record))
    return out


def write_records(records, path) -> None:
    """Write one JSON object per admission, keys sorted, absence omitted."""
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json_dict(), sort_keys=True))
            fh.write("\n")


def read_records(path) -> list[AdmissionRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{line_no}: invalid JSON: {exc}") from exc
            records.append(AdmissionRecord.from_json_dict(data))
    return records
