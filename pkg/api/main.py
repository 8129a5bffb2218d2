"""
FEI Bounds Toolkit - REST API

Read-only FastAPI backend serving function profiles, lexicographic limit
profiles and lower-bound reports.

Run with:
    uvicorn api.main:app --reload --port 8000
"""
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent))

from src import __version__
from src.bf_core import profile
from src.bounds import BoundReport, lb1, lb2, lb3, lb_gamma, named_profile, table1
from src.errors import CheckFailed, DomainError
from src.formula import evaluate, max_variable, parse
from src.lex import lex_profile_exact, lex_profile_truncated, parse_measure

app = FastAPI(
    title="FEI Bounds Toolkit API",
    description="Entropy/influence profiles and lower bounds on the FEI constant",
    version=__version__
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=False,
    allow_methods=["*"],
    allow_headers=["*"],
)

MAX_API_VARS = 20


# --- Response Models ---

class ProfileResponse(BaseModel):
    formula: str
    n: int
    p: str
    I: str
    H: float
    E: str
    V: str
    I_plus: Optional[str] = None
    H_plus: Optional[float] = None


class LexResponse(BaseModel):
    mu: str
    I: str
    H: float
    error_bound_I: float
    error_bound_H: float
    bits: Optional[int] = None


class Table1Row(BaseModel):
    m: int
    n: int
    I: str
    H: float
    C: float
    H_target: float
    C_target: float


def _exact(value) -> Optional[str]:
    if value is None:
        return None
    return str(value) if isinstance(value, (Fraction, int)) else repr(float(value))


def _guarded(fn, *args, **kwargs):
    """Run a library call, mapping domain errors to 400 and failed checks to 422."""
    try:
        return fn(*args, **kwargs)
    except CheckFailed as e:
        raise HTTPException(status_code=422, detail=f"{e.check}: {e.detail}")
    except DomainError as e:
        raise HTTPException(status_code=400, detail=str(e))


# --- Endpoints ---

@app.get("/")
def root():
    return {"name": "FEI Bounds Toolkit API", "docs": "/docs", "health": "/api/health"}


@app.get("/api/health")
def health():
    return {"status": "ok", "version": __version__}


@app.get("/api/profile", response_model=ProfileResponse)
def get_profile(formula: str = Query(..., min_length=1, description="Formula text, e.g. x1 & x2"),
                n: Optional[int] = Query(None, ge=1, le=MAX_API_VARS)):
    """(p, I, H) and derived quantities of a formula's truth table."""
    node = _guarded(parse, formula)
    n = n or max_variable(node)
    if n > MAX_API_VARS:
        raise HTTPException(status_code=400, detail=f"n={n} above the API cap of {MAX_API_VARS}")
    prof = _guarded(lambda: profile(evaluate(node, n)))
    return ProfileResponse(formula=formula, n=n, p=_exact(prof.p), I=_exact(prof.I), H=prof.H,
                           E=_exact(prof.E), V=_exact(prof.V), I_plus=_exact(prof.I_plus),
                           H_plus=prof.H_plus)


@app.get("/api/lex", response_model=LexResponse)
def get_lex(mu: str = Query(..., description="Measure as a fraction (2/3) or decimal"),
            bits: Optional[int] = Query(None, ge=8, le=160)):
    """Profile of the limit lexicographic function l<mu>."""
    value = _guarded(parse_measure, mu)
    if bits is None and isinstance(value, Fraction):
        lp = _guarded(lex_profile_exact, value)
    else:
        lp = _guarded(lex_profile_truncated, value, bits or 60)
    return LexResponse(mu=_exact(lp.mu), I=_exact(lp.I), H=lp.H, error_bound_I=lp.error_bound_I,
                       error_bound_H=lp.error_bound_H, bits=lp.bits)


@app.get("/api/bounds/{name}", response_model=BoundReport)
def get_bound(name: str,
              profile_name: Optional[str] = Query(None, alias="profile",
                                                  description="Starting profile for lb3/gamma"),
              start: str = Query("iota", description="Older name for profile")):
    """Evaluate one of the lower-bound pipelines. A gamma miss comes back with informational=true."""
    if name == 'lb1':
        return _guarded(lb1)
    if name == 'lb2':
        return _guarded(lb2)
    if name in ('lb3', 'gamma'):
        start_profile = _guarded(named_profile, profile_name or start)
        return _guarded(lb3 if name == 'lb3' else lb_gamma, start_profile)
    raise HTTPException(status_code=404, detail=f"Bound {name} not found")


@app.get("/api/table1", response_model=List[Table1Row])
def get_table1(max_m: int = Query(6, ge=2, le=10)):
    """Rows of the g_m table for m = 2..max_m."""
    df = _guarded(table1, max_m=max_m)
    return [Table1Row(m=int(r['m']), n=int(r['n']), I=_exact(r['I']), H=float(r['H']),
                      C=float(r['C']), H_target=float(r['H_target']), C_target=float(r['C_target']))
            for r in df.to_dict('records')]


if __name__ == "__main__":
    import uvicorn
    uvicorn.run("api.main:app", host="0.0.0.0", port=8000, reload=True)
