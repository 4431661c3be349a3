"""Versioned text archive for constructed pairs.

Layout: a canonical JSON body (sorted keys, every integer as a decimal
string) followed by one trailing line ``digest: sha256:<hex>`` computed over
the body bytes.  Serialization is canonical, so save -> load -> save is
byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .construction import ABlock, BBlockDescriptor, ComplementPair, GrowthConfig
from .errors import FormatError, IntegrityError, InvariantError

FORMAT_VERSION = 1
_DIGEST_PREFIX = "digest: sha256:"


def _ints(xs) -> list[str]:
    return [str(x) for x in xs]


def _config_dict(c: GrowthConfig) -> dict:
    return {
        "K": str(c.K),
        "policy": c.policy,
        "seed": str(c.seed),
        "sieve_threshold": str(c.sieve_threshold),
        "omega": c.omega,
        "u_list": None if c.u_list is None else _ints(c.u_list),
        "enforce_omega": c.enforce_omega,
    }


def dumps(pair: ComplementPair) -> str:
    body = {
        "format_version": FORMAT_VERSION,
        "config": _config_dict(pair.config),
        "schedule": _ints(pair.schedule),
        "u": _ints(pair.u),
        "retries": _ints(pair.retries),
        "a_blocks": [{"k": str(b.k), "u_k": str(b.u_k), "elements": _ints(b.elements)} for b in pair.a_blocks],
        "b_descriptors": [
            {"k": str(d.k), "modulus": str(d.modulus), "lower": str(d.lower), "upper": str(d.upper)}
            for d in pair.b_descriptors
        ],
    }
    text = json.dumps(body, sort_keys=True, indent=1) + "\n"
    return text + _DIGEST_PREFIX + hashlib.sha256(text.encode()).hexdigest() + "\n"


def _to_int(s) -> int:
    if not isinstance(s, str) or not s.lstrip("-").isdigit():
        raise FormatError(f"expected decimal string, got {s!r}")
    return int(s)


def loads(text: str, check: bool = True) -> ComplementPair:
    head, sep, tail = text.rpartition(_DIGEST_PREFIX)
    if not sep or not tail.endswith("\n") or len(tail.strip()) != 64 or not head.endswith("\n"):
        raise FormatError("missing or malformed trailing digest line")
    if hashlib.sha256(head.encode()).hexdigest() != tail.strip():
        raise IntegrityError("digest mismatch")
    try:
        body = json.loads(head)
    except json.JSONDecodeError as exc:
        raise FormatError(f"body is not valid: {exc}") from exc
    if not isinstance(body, dict) or body.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {body.get('format_version') if isinstance(body, dict) else None!r}")
    try:
        c = body["config"]
        config = GrowthConfig(
            K=_to_int(c["K"]),
            policy=c["policy"],
            seed=_to_int(c["seed"]),
            sieve_threshold=_to_int(c["sieve_threshold"]),
            omega=c["omega"],
            u_list=None if c["u_list"] is None else tuple(_to_int(x) for x in c["u_list"]),
            enforce_omega=bool(c["enforce_omega"]),
        )
        pair = ComplementPair(
            schedule=tuple(_to_int(x) for x in body["schedule"]),
            u=tuple(_to_int(x) for x in body["u"]),
            a_blocks=tuple(
                ABlock(_to_int(b["k"]), _to_int(b["u_k"]), tuple(_to_int(x) for x in b["elements"]))
                for b in body["a_blocks"]
            ),
            b_descriptors=tuple(
                BBlockDescriptor(_to_int(d["k"]), _to_int(d["modulus"]), _to_int(d["lower"]), _to_int(d["upper"]))
                for d in body["b_descriptors"]
            ),
            config=config,
            retries=tuple(_to_int(x) for x in body["retries"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"schema error: {exc}") from exc
    if check:
        from .verification import verify_invariants

        rep = verify_invariants(pair)
        if not rep.overall:
            raise InvariantError(rep)
    return pair


def save_pair(pair: ComplementPair, path: str | Path) -> None:
    Path(path).write_text(dumps(pair), encoding="utf-8")


def load_pair(path: str | Path, check: bool = True) -> ComplementPair:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"not UTF-8: {exc}") from exc
    return loads(text, check=check)
