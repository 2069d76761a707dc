"""JSON schemas for every file format fermiswap reads"""

_NUMBER_ARRAY = {"type": "array", "items": {"type": "number"}}

HAMILTONIAN_SCHEMA = {
    "type": "object",
    "properties": {
        "n_modes": {"type": "integer", "minimum": 1},
        "T": _NUMBER_ARRAY,
        "U": _NUMBER_ARRAY,
        "V": _NUMBER_ARRAY,
    },
    "required": ["n_modes", "T", "U", "V"],
    "additionalProperties": False,
}

HUBBARD_SCHEMA = {
    "type": "object",
    "properties": {
        "rows": {"type": "integer", "minimum": 1},
        "cols": {"type": "integer", "minimum": 1},
        "t": {"type": "number"},
        "U": {"type": "number"},
        "spinless": {"type": "boolean"},
    },
    "required": ["rows", "cols", "t", "U"],
    "additionalProperties": False,
}

UNITARY_SCHEMA = {
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "eta": {"type": "integer", "minimum": 1},
        "re": _NUMBER_ARRAY,
        "im": _NUMBER_ARRAY,
    },
    "required": ["n", "re", "im"],
    "additionalProperties": False,
}

GATE_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["fsim", "givens", "phase", "fswap"]},
        "qubits": {
            "type": "array",
            "items": {"type": "integer", "minimum": 0},
            "minItems": 1,
            "maxItems": 2,
        },
        "params": _NUMBER_ARRAY,
    },
    "required": ["kind", "qubits", "params"],
    "additionalProperties": False,
}

CIRCUIT_SCHEMA = {
    "type": "object",
    "properties": {
        "n_qubits": {"type": "integer", "minimum": 1},
        "layers": {"type": "array", "items": {"type": "array", "items": GATE_SCHEMA}},
        "metadata": {"type": "object"},
    },
    "required": ["n_qubits", "layers", "metadata"],
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "check": {"type": "string"},
        "n": {"type": "integer"},
        "metric": {"type": "number"},
        "tolerance": {"type": "number"},
        "pass": {"type": "boolean"},
        "seconds": {"type": "number"},
    },
    "required": ["check", "n", "metric", "tolerance", "pass", "seconds"],
    "additionalProperties": False,
}
