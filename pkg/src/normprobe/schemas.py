"""JSON schemas of the files written by the command-line tool."""

VECTOR = {
    "type": "array",
    "items": {
        "oneOf": [
            {"type": "number"},
            {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        ]
    },
    "minItems": 1,
}

SCALAR = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}

WITNESS = {
    "type": "object",
    "required": ["x", "defect"],
    "properties": {
        "formula": {"type": "string"},
        "x": VECTOR,
        "y": VECTOR,
        "x2": VECTOR,
        "lambda": SCALAR,
        "defect": {"type": "number", "minimum": 0},
        "raw_defect": {"type": "number", "minimum": 0},
    },
}

DEFECT_REPORT = {
    "type": "object",
    "required": ["probe_name", "sup_defect", "n_samples"],
    "properties": {
        "probe_name": {"type": "string"},
        "sup_defect": {"type": "number", "minimum": 0},
        "raw_sup": {"type": "number", "minimum": 0},
        "n_samples": {"type": "integer", "minimum": 1},
        "tolerance": {"type": "number"},
        "seed": {"type": "integer", "minimum": 0},
        "witness": WITNESS,
        "details": {"type": "object"},
    },
}

VERDICT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "normprobe verdict",
    "type": "object",
    "required": ["outcome", "threshold", "evidence"],
    "properties": {
        "outcome": {"enum": ["InnerProductConsistent", "NotInnerProduct"]},
        "threshold": {"type": "number", "exclusiveMinimum": 0},
        "evidence": {"type": "array", "items": DEFECT_REPORT, "minItems": 1},
        "witness_probe": {"type": "string"},
    },
}

GRAM_RECON = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "normprobe gram reconstruction",
    "type": "object",
    "required": ["gram", "residual_sup", "spd_margin"],
    "properties": {
        "gram": {"type": "array", "items": VECTOR},
        "residual_sup": {"type": "number", "minimum": 0},
        "spd_margin": {"type": "number"},
        "form_axioms": {"type": "array", "items": DEFECT_REPORT},
    },
}
