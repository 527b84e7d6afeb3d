"""HTTP/JSON facade over the guideline workflow for the advisory console.

Sessions hold one patient profile each, in memory, with optional JSONL
persistence of mutations.  Every response carries the profile hash it was
computed against (so the console can discard stale answers) and the phase
timings.  Computation is stateless with respect to session history: the
same profile always yields the same report.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .compliance import (
    Recommendation,
    UnknownAtom,
    UnknownTreatment,
    check_compliance,
    confirm_evidence,
    enumerate_recommendations,
)
from .engine import DepthLimitExceeded
from .heart_failure import PatientProfile, ProfileError, load_profile, normalize_profile
from .syntax import ParseError, Program, parse_program


class CreateSession(BaseModel):
    facts: str


class CheckRequest(BaseModel):
    treatment: str
    cor_class: str


class EvidenceRequest(BaseModel):
    confirm: list[str]


@dataclass
class Session:
    profile: PatientProfile
    lock: threading.Lock = field(default_factory=threading.Lock)
    reports: list[dict] = field(default_factory=list)


def profile_hash(profile: PatientProfile) -> str:
    return hashlib.sha256(profile.canonical_text().encode("utf-8")).hexdigest()[:16]


def profile_view(profile: PatientProfile) -> dict:
    return {
        "evidence": sorted(str(a) for a in profile.evidence),
        "diagnoses": sorted(str(a) for a in profile.diagnoses),
        "history": sorted(str(a) for a in profile.history),
        "measurements": {k: str(v) for k, v in sorted(profile.measurements.items())},
        "contraindications": sorted(str(a) for a in profile.contraindications),
        "known_absent": sorted(str(a) for a in profile.known_absent),
        "assertions": sorted(str(a) for a in profile.assertions),
        "notes": list(profile.notes),
        "profile_hash": profile_hash(profile),
    }


def _parse_atoms(texts: list[str]):
    atoms = []
    for text in texts:
        program = parse_program(text.rstrip(".") + ".")
        atoms.append(program.rules[0].head)
    return atoms


def create_app(kb: Program | None = None, persist_path: str | None = None) -> FastAPI:
    app = FastAPI(title="gdasp advisory service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}

    # Malformed request bodies are client errors (400); 422 is reserved for
    # syntactically valid requests whose profile facts do not parse.
    @app.exception_handler(RequestValidationError)
    def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": str(exc.errors())})

    def persist(event: dict) -> None:
        if persist_path:
            with open(persist_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event) + "\n")

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/vocabulary")
    def vocabulary_endpoint() -> dict:
        from .heart_failure import COR_CLASSES, treatments, vocabulary

        return {
            "atoms": sorted(str(a) for a in vocabulary()),
            "treatments": list(treatments()),
            "cor_classes": list(COR_CLASSES),
        }

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSession) -> dict:
        try:
            profile = normalize_profile(load_profile(body.facts))
        except (ParseError, ProfileError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        session_id = secrets.token_urlsafe(16)
        sessions[session_id] = Session(profile=profile)
        persist({"event": "create", "session": session_id,
                 "profile": profile.canonical_text()})
        return {"id": session_id, "profile": profile_view(profile)}

    @app.get("/sessions/{session_id}/profile")
    def get_profile(session_id: str) -> dict:
        return {"profile": profile_view(get_session(session_id).profile)}

    @app.get("/sessions/{session_id}/recommendations")
    def recommendations(session_id: str) -> dict:
        session = get_session(session_id)
        started = time.perf_counter()
        try:
            recs = enumerate_recommendations(session.profile, kb=kb)
        except DepthLimitExceeded as exc:
            raise HTTPException(status_code=500, detail=str(exc))
        elapsed = round((time.perf_counter() - started) * 1000, 3)
        return {
            "recommendations": [
                {"treatment": r.treatment, "cor_class": r.cor_class} for r in recs
            ],
            "timings_ms": {"enumerate_ms": elapsed},
            "profile_hash": profile_hash(session.profile),
        }

    @app.post("/sessions/{session_id}/check")
    def check(session_id: str, body: CheckRequest) -> dict:
        session = get_session(session_id)
        try:
            report = check_compliance(
                session.profile, Recommendation(body.treatment, body.cor_class), kb=kb
            )
        except UnknownTreatment as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except DepthLimitExceeded as exc:
            raise HTTPException(status_code=500, detail=str(exc))
        payload = report.to_json()
        payload["profile_hash"] = profile_hash(session.profile)
        session.reports.append(payload)
        return payload

    @app.post("/sessions/{session_id}/evidence")
    def evidence(session_id: str, body: EvidenceRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            try:
                atoms = _parse_atoms(body.confirm)
                session.profile = confirm_evidence(session.profile, atoms)
            except (ParseError, UnknownAtom) as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            persist({"event": "evidence", "session": session_id,
                     "confirm": body.confirm})
            return {"profile": profile_view(session.profile)}

    return app
