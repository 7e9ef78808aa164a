"""
GAPFORGE Counterexample Files

JSON persistence of forged instances and conversion of reports to JSON.

Layout (field order is the model declaration order and is stable):
format_version, tool_version, seed, params, field, z_count, witnesses,
certificate, sum_audit, prime_search. Big integers (p, omega, xi, z,
codeword coefficients) are decimal strings; rationals are "num/den" strings.
Agreement sets are stored either as index lists or as (start, stride, count)
progressions.
"""

import dataclasses
import enum
import json
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    StringConstraints,
    ValidationError,
    model_validator,
)

from . import __version__
from .errors import FormatError, ParameterError
from .forge import Counterexample, PrimeSearchLog, SumAudit
from .params import IdentityReport, ParamSet, Profile, RateSpec, as_ratio, check_identities
from .poly import DensePoly
from .rscode import AgreementWitness, NoCorrelatedAgreementCert


FORMAT_VERSION = "1.0"

Decimal = Annotated[str, StringConstraints(pattern=r"^-?[0-9]+$")]
Ratio = Annotated[str, StringConstraints(pattern=r"^-?[0-9]+(/[0-9]+)?$")]

# Integers at or above this magnitude are written as decimal strings in reports.
JSON_SAFE_INT = 2 ** 53


# =============================================================================
# File Schema
# =============================================================================

class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ParamsModel(_Model):
    C: Ratio
    u: int
    v: int
    rho: Ratio
    L: float
    L_branch: str
    K: int
    alpha: int
    s: int
    r: int
    m: int
    n: int
    k: int
    delta: Ratio
    eta: Ratio
    A: float
    profile: Profile


class FieldModel(_Model):
    p: Decimal
    omega: Decimal
    xi: Decimal


class Progression(_Model):
    start: int = Field(ge=0)
    stride: int = Field(gt=0)
    count: int = Field(gt=0)


class WitnessModel(_Model):
    z: Decimal
    codeword: List[Decimal]
    agreement: Optional[List[NonNegativeInt]] = None
    agreement_runs: Optional[List[Progression]] = None
    claimed_delta: Ratio
    xi_exponents: List[NonNegativeInt] = Field(min_length=1)

    @model_validator(mode="after")
    def _one_agreement_form(self) -> "WitnessModel":
        if (self.agreement is None) == (self.agreement_runs is None):
            raise ValueError("exactly one of agreement / agreement_runs is required")
        return self


class CertificateModel(_Model):
    g_degree: int
    max_joint_agreement_bound: int
    required_agreement: int
    n: int
    k: int
    interleaved_distance_lower_bound: Ratio


class SumAuditModel(_Model):
    mode: str
    subsets_examined: int
    collisions_found: int
    distinct_sums: int
    pairs_compared: int


class PrimeSearchModel(_Model):
    seed: int
    strategy: str
    candidates_tried: int
    primes_rejected: int


class CxFile(_Model):
    format_version: str
    tool_version: str
    seed: int
    params: ParamsModel
    field: FieldModel
    z_count: int
    witnesses: List[WitnessModel]
    certificate: CertificateModel
    sum_audit: SumAuditModel
    prime_search: PrimeSearchModel


# =============================================================================
# Agreement Progressions
# =============================================================================

def compress_indices(indices: List[int], stride: int) -> List[Progression]:
    """Split indices into runs start, start + stride, ... grouped by residue."""
    by_residue: Dict[int, List[int]] = {}
    for t in indices:
        by_residue.setdefault(t % stride, []).append(t)
    runs = []
    for residue in sorted(by_residue):
        group = sorted(by_residue[residue])
        start, count = group[0], 1
        for t in group[1:]:
            if t == start + count * stride:
                count += 1
            else:
                runs.append(Progression(start=start, stride=stride, count=count))
                start, count = t, 1
        runs.append(Progression(start=start, stride=stride, count=count))
    return runs


def expand_runs(runs: List[Progression]) -> Tuple[int, ...]:
    """Sorted union of the progressions, duplicates kept."""
    return tuple(sorted(run.start + i * run.stride for run in runs for i in range(run.count)))


# =============================================================================
# Conversion
# =============================================================================

def params_to_model(ps: ParamSet) -> ParamsModel:
    return ParamsModel(
        C=as_ratio(ps.C) if ps.C.denominator != 1 else str(ps.C.numerator),
        u=ps.rate.u,
        v=ps.rate.v,
        rho=as_ratio(ps.rho),
        L=ps.L_val,
        L_branch=ps.L_branch,
        K=ps.K,
        alpha=ps.alpha,
        s=ps.s,
        r=ps.r,
        m=ps.m,
        n=ps.n,
        k=ps.k,
        delta=as_ratio(ps.delta, ps.s),
        eta=as_ratio(ps.eta, ps.s),
        A=ps.A_exp,
        profile=ps.profile,
    )


def params_from_model(model: ParamsModel) -> ParamSet:
    """Rebuild a ParamSet from stored values; nothing is re-derived here."""
    ps = ParamSet(
        C=Fraction(model.C),
        rate=RateSpec(model.u, model.v),
        L_val=model.L,
        L_branch=model.L_branch,
        K=model.K,
        alpha=model.alpha,
        s=model.s,
        r=model.r,
        m=model.m,
        n=model.n,
        k=model.k,
        delta=Fraction(model.delta),
        eta=Fraction(model.eta),
        A_exp=model.A,
        profile=model.profile,
    )
    return dataclasses.replace(ps, identities=check_identities(ps))


def to_file(cx: Counterexample, compress: bool = True) -> CxFile:
    """Schema model of a counterexample."""
    s = cx.params.s
    witnesses = []
    for wit in cx.witnesses:
        indices = list(wit.agreement_exponents)
        witnesses.append(WitnessModel(
            z=str(wit.z),
            codeword=[str(c) for c in wit.codeword_poly.coeffs],
            agreement=None if compress else indices,
            agreement_runs=compress_indices(indices, s) if compress else None,
            claimed_delta=as_ratio(wit.claimed_delta, s),
            xi_exponents=list(wit.xi_exponents),
        ))
    cert = cx.cert
    return CxFile(
        format_version=FORMAT_VERSION,
        tool_version=__version__,
        seed=cx.seed,
        params=params_to_model(cx.params),
        field=FieldModel(p=str(cx.p), omega=str(cx.omega), xi=str(cx.xi)),
        z_count=cx.z_count,
        witnesses=witnesses,
        certificate=CertificateModel(
            g_degree=cert.g_degree,
            max_joint_agreement_bound=cert.max_joint_agreement_bound,
            required_agreement=cert.required_agreement,
            n=cert.n,
            k=cert.k,
            interleaved_distance_lower_bound=as_ratio(cert.interleaved_distance_lower_bound, cert.n),
        ),
        sum_audit=SumAuditModel(**dataclasses.asdict(cx.sum_audit)),
        prime_search=PrimeSearchModel(**dataclasses.asdict(cx.prime_search_log)),
    )


def from_file(model: CxFile) -> Counterexample:
    """Counterexample from a validated schema model."""
    try:
        ps = params_from_model(model.params)
    except (ParameterError, ValueError, ZeroDivisionError) as e:
        raise FormatError(f"invalid params: {e}") from e

    p = int(model.field.p)
    if p < 2:
        raise FormatError("p < 2")
    witnesses = []
    for wit in model.witnesses:
        agreement = tuple(wit.agreement) if wit.agreement is not None else expand_runs(wit.agreement_runs)
        witnesses.append(AgreementWitness(
            z=int(wit.z),
            codeword_poly=DensePoly(tuple(int(c) for c in wit.codeword), p),
            agreement_exponents=agreement,
            claimed_delta=Fraction(wit.claimed_delta),
            xi_exponents=tuple(wit.xi_exponents),
        ))
    cert = model.certificate
    return Counterexample(
        params=ps,
        p=p,
        omega=int(model.field.omega),
        xi=int(model.field.xi),
        r=model.params.r,
        m=model.params.m,
        witnesses=tuple(witnesses),
        cert=NoCorrelatedAgreementCert(
            g_degree=cert.g_degree,
            max_joint_agreement_bound=cert.max_joint_agreement_bound,
            required_agreement=cert.required_agreement,
            n=cert.n,
            k=cert.k,
            interleaved_distance_lower_bound=Fraction(cert.interleaved_distance_lower_bound),
        ),
        z_count=model.z_count,
        prime_search_log=PrimeSearchLog(**model.prime_search.model_dump()),
        sum_audit=SumAudit(**model.sum_audit.model_dump()),
        seed=model.seed,
    )


# =============================================================================
# Text and Disk I/O
# =============================================================================

def dumps(cx: Counterexample, compress: bool = True) -> str:
    return to_file(cx, compress).model_dump_json(indent=2) + "\n"


def loads(text: str) -> Counterexample:
    """
    Parse a counterexample file.

    Raises:
        FormatError: malformed JSON, unknown format_version, schema violation
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"not JSON: {e}") from e
    if not isinstance(data, dict):
        raise FormatError("top level is not an object")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {version!r} (expected {FORMAT_VERSION!r})")
    try:
        model = CxFile.model_validate(data)
    except ValidationError as e:
        raise FormatError(f"schema violation: {e.error_count()} error(s): {e.errors()[0]['msg']}") from e
    return from_file(model)


def save(cx: Counterexample, path: Path, compress: bool = True) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(cx, compress), encoding="utf-8")
    return path


def read(path: Path) -> Counterexample:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}") from e
    return loads(text)


# =============================================================================
# Report JSON
# =============================================================================

def to_jsonable(obj: Any) -> Any:
    """
    JSON-safe copy of a report: dataclasses and pydantic models become dicts,
    Fractions "num/den" strings, large ints decimal strings.
    """
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    if isinstance(obj, ParamSet):
        data = params_to_model(obj).model_dump(mode="json")
        if obj.identities is not None:
            data["identities"] = to_jsonable(obj.identities)
        return data
    if isinstance(obj, IdentityReport):
        return {"profile": obj.profile.value, "ok": obj.ok,
                "checks": [dataclasses.asdict(check) for check in obj.checks]}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        data = {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.repr}
        for name in ("ok", "holds", "passed"):
            if hasattr(type(obj), name) and isinstance(getattr(type(obj), name), property):
                data[name] = getattr(obj, name)
        return data
    if isinstance(obj, Fraction):
        return as_ratio(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, (int, np.integer)):
        value = int(obj)
        return str(value) if abs(value) >= JSON_SAFE_INT else value
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [to_jsonable(item) for item in obj]
    return str(obj)


def dump_report(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, ensure_ascii=False)
