"""Field-modulus registry: JSON mapping degree -> hex modulus."""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .errors import RegistryError
from .field import MAX_DEGREE, default_modulus, is_irreducible

ENV_VAR = "BENTFORGE_REGISTRY"


def builtin_registry() -> dict[int, int]:
    return {n: default_modulus(n) for n in range(1, MAX_DEGREE + 1)}


def parse_registry(text: str) -> dict[int, int]:
    """Overrides from registry text; blank text means no overrides."""
    if not text.strip():
        return {}
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RegistryError(f"registry is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise RegistryError("registry must be a JSON object")
    out = {}
    for key, value in raw.items():
        try:
            degree = int(key)
            modulus = int(value, 16) if isinstance(value, str) else int(value)
        except (TypeError, ValueError):
            raise RegistryError(f"entry {key!r}: {value!r} is not degree -> hex modulus") from None
        if not 1 <= degree <= MAX_DEGREE:
            raise RegistryError(f"entry {key!r}: degree outside 1..{MAX_DEGREE}")
        if modulus.bit_length() - 1 != degree:
            raise RegistryError(f"entry {key!r}: modulus {modulus:#x} has degree {modulus.bit_length() - 1}")
        if not is_irreducible(modulus):
            raise RegistryError(f"entry {key!r}: modulus {modulus:#x} is reducible")
        out[degree] = modulus
    return out


def load_registry(path: str | Path | None = None) -> dict[int, int]:
    """Built-in moduli overlaid with the file at ``path`` (or $BENTFORGE_REGISTRY)."""
    path = path or os.environ.get(ENV_VAR)
    merged = builtin_registry()
    if path:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise RegistryError(f"cannot read registry {path}: {exc}") from None
        merged.update(parse_registry(text))
    return merged


def registry_hash(registry: dict[int, int]) -> str:
    canon = json.dumps({str(k): f"{v:#x}" for k, v in sorted(registry.items())}, sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()
