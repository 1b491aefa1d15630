"""Batch CLI: ``compute <command> --in job.json [--oracle] [--out file]``.

Jobs are JSON documents validated against per-command schemas
(``compute --schema <command>`` prints one).  Output is a canonical JSON
document (sorted keys, two-space indent, trailing newline), so identical
inputs produce byte-identical outputs.  Exit codes: 0 success, 2 schema
error, 3 mathematical precondition failure, 4 oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys

import jsonschema

from . import __version__
from .bicategory import (
    Bimodule,
    RingObject,
    TwoCell,
    hcompose,
    shadow,
    twisted_unit,
    unit_bimodule,
)
from .duality import canonical_dual, euler_characteristic, hattori_stallings_trace, trace
from .errors import AlgebraError, SchemaError
from .gring import RingElement, RingMatrix
from .groups import (
    FiniteTable,
    FreeAbelian,
    GroupHom,
    cyclic,
    dihedral4,
    direct_product,
    klein_four,
    quaternion8,
    symmetric3,
    trivial_group,
)
from .morita import (
    RingHom,
    base_change_pair,
    matrix_morita,
    restriction,
    restriction_transfer_composite,
    transfer,
    twisted_transfer,
    verify_morita,
)
from .duality import verify_dual_pair
from .fixedpoint import (
    circle_self_map,
    lefschetz_via_homology,
    reidemeister_trace,
    torus2_self_map,
)
from .nerve import nerve_pi0
from .twisted import hochschild_twisted_classes, twisted_conjugacy_classes

COMMANDS = (
    "hh0", "trace", "euler", "transfer", "twisted-transfer",
    "reidemeister", "nerve-pi0", "morita-check",
)

_GROUP_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "type": {"const": "named"},
                "name": {"enum": ["trivial", "s3", "d4", "q8", "klein"]},
            },
            "required": ["type", "name"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"type": {"const": "cyclic"}, "n": {"type": "integer", "minimum": 1}},
            "required": ["type", "n"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"type": {"const": "free_abelian"}, "rank": {"type": "integer", "minimum": 0}},
            "required": ["type", "rank"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "table"},
                "elements": {"type": "array", "items": {"type": "string"}},
                "table": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
            },
            "required": ["type", "elements", "table"],
            "additionalProperties": False,
        },
    ]
}

_ENDO_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"images": {"type": "array", "items": {"type": "integer"}}},
            "required": ["images"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"matrix": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}},
            "required": ["matrix"],
            "additionalProperties": False,
        },
    ]
}

_ELEMENT_SCHEMA = {
    "description": "group element: index (finite) or exponent vector (free abelian)",
    "oneOf": [{"type": "integer"}, {"type": "array", "items": {"type": "integer"}}],
}

_RING_ELEMENT_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {"elem": _ELEMENT_SCHEMA, "coeff": {"type": "integer"}},
        "required": ["elem", "coeff"],
        "additionalProperties": False,
    },
}

_MATRIX_SCHEMA = {
    "type": "object",
    "properties": {
        "rows": {"type": "integer", "minimum": 0},
        "cols": {"type": "integer", "minimum": 0},
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "i": {"type": "integer", "minimum": 0},
                    "j": {"type": "integer", "minimum": 0},
                    "value": _RING_ELEMENT_SCHEMA,
                },
                "required": ["i", "j", "value"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["rows", "cols", "entries"],
    "additionalProperties": False,
}

_MODULE_SCHEMA = {
    "type": "object",
    "description": "right-free bimodule: rank and action matrix per group generator",
    "properties": {
        "rank": {"type": "integer", "minimum": 0},
        "action": {"type": "array", "items": _MATRIX_SCHEMA},
    },
    "required": ["rank", "action"],
    "additionalProperties": False,
}

SCHEMAS = {
    "hh0": {
        "type": "object",
        "properties": {
            "command": {"const": "hh0"},
            "group": _GROUP_SCHEMA,
            "twist": _ENDO_SCHEMA,
            "amp": {"type": "integer", "minimum": 1},
        },
        "required": ["command", "group"],
        "additionalProperties": False,
    },
    "trace": {
        "type": "object",
        "properties": {
            "command": {"const": "trace"},
            "group": _GROUP_SCHEMA,
            "module": _MODULE_SCHEMA,
            "endomorphism": _MATRIX_SCHEMA,
            "source_twist": _ENDO_SCHEMA,
            "target_twist": _ENDO_SCHEMA,
        },
        "required": ["command", "group", "module", "endomorphism"],
        "additionalProperties": False,
    },
    "euler": {
        "type": "object",
        "properties": {
            "command": {"const": "euler"},
            "group": _GROUP_SCHEMA,
            "module": _MODULE_SCHEMA,
        },
        "required": ["command", "group", "module"],
        "additionalProperties": False,
    },
    "transfer": {
        "type": "object",
        "properties": {
            "command": {"const": "transfer"},
            "group": _GROUP_SCHEMA,
            "subgroup_images": {"type": "array", "items": {"type": "integer"}},
            "subgroup": _GROUP_SCHEMA,
        },
        "required": ["command", "group", "subgroup", "subgroup_images"],
        "additionalProperties": False,
    },
    "twisted-transfer": {
        "type": "object",
        "properties": {
            "command": {"const": "twisted-transfer"},
            "group": _GROUP_SCHEMA,
            "subgroup": _GROUP_SCHEMA,
            "subgroup_images": {"type": "array", "items": {"type": "integer"}},
            "j": _ENDO_SCHEMA,
            "k": _ENDO_SCHEMA,
        },
        "required": ["command", "group", "subgroup", "subgroup_images", "j", "k"],
        "additionalProperties": False,
    },
    "reidemeister": {
        "type": "object",
        "properties": {
            "command": {"const": "reidemeister"},
            "kind": {"enum": ["circle", "torus"]},
            "degree": {"type": "integer"},
            "matrix": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        },
        "required": ["command", "kind"],
        "additionalProperties": False,
    },
    "nerve-pi0": {
        "type": "object",
        "properties": {
            "command": {"const": "nerve-pi0"},
            "group": _GROUP_SCHEMA,
            "twist": _ENDO_SCHEMA,
        },
        "required": ["command", "group", "twist"],
        "additionalProperties": False,
    },
    "morita-check": {
        "type": "object",
        "properties": {
            "command": {"const": "morita-check"},
            "group": _GROUP_SCHEMA,
            "n": {"type": "integer", "minimum": 1},
        },
        "required": ["command", "group", "n"],
        "additionalProperties": False,
    },
}


# ---------------------------------------------------------------------------
# decoding


def _decode_group(doc):
    t = doc["type"]
    if t == "named":
        return {
            "trivial": trivial_group,
            "s3": symmetric3,
            "d4": dihedral4,
            "q8": quaternion8,
            "klein": klein_four,
        }[doc["name"]]()
    if t == "cyclic":
        return cyclic(doc["n"])
    if t == "free_abelian":
        return FreeAbelian(doc["rank"])
    return FiniteTable(doc["elements"], doc["table"])


def _decode_endo(group, doc):
    if doc is None:
        return GroupHom.identity_hom(group)
    if "matrix" in doc:
        return GroupHom(group, group, doc["matrix"])
    return GroupHom(group, group, list(doc["images"]))


def _decode_element(group, doc):
    return tuple(doc) if isinstance(doc, list) else doc


def _decode_ring_element(group, doc) -> RingElement:
    out = RingElement.zero(group)
    for term in doc:
        out = out + RingElement.group(group, _decode_element(group, term["elem"]), term["coeff"])
    return out


def _decode_matrix(group, doc) -> RingMatrix:
    entries = {
        (e["i"], e["j"]): _decode_ring_element(group, e["value"]) for e in doc["entries"]
    }
    return RingMatrix(group, doc["rows"], doc["cols"], entries)


def _decode_module(group, doc) -> Bimodule:
    ring = RingObject(group)
    gens = list(group.generators())
    mats = [_decode_matrix(group, m) for m in doc["action"]]
    if len(mats) != len(gens):
        raise SchemaError(f"need one action matrix per generator ({len(gens)})")
    return Bimodule(ring, ring, doc["rank"], dict(zip(gens, mats)))


def _encode_shadow_element(elt) -> list:
    pres = elt.presentation
    out = []
    for label in sorted(elt.coeffs, key=lambda l: str(pres.label_name(l))):
        out.append({"class": pres.label_name(label), "coeff": elt.coeffs[label]})
    return out


def _shadow_map_table(m, labels=None) -> list:
    labels = m.dom.labels() if labels is None else labels
    table = []
    for label in labels:
        table.append({
            "from": m.dom.label_name(label),
            "to": _encode_shadow_element(m.on_label(label)),
        })
    return table


# ---------------------------------------------------------------------------
# command handlers; each returns (result_dict, oracle_dict | None)


def _run_hh0(job, with_oracle):
    group = _decode_group(job["group"])
    twist = _decode_endo(group, job.get("twist"))
    ring = RingObject(group, job.get("amp", 1))
    pres = shadow(twisted_unit(ring, twist) if "twist" in job else unit_bimodule(ring))
    labels = pres.labels()
    result = {
        "rank": len(labels),
        "classes": [pres.label_name(l) for l in labels],
    }
    oracle = None
    if with_oracle:
        # independent route: brute-force orbit enumeration of the class relation
        classes = hochschild_twisted_classes(group, twist)
        oracle = {
            "method": "orbit enumeration",
            "rank": classes.class_count(),
            "agrees": classes.class_count() == len(labels),
        }
    return result, oracle


def _run_trace(job, with_oracle):
    group = _decode_group(job["group"])
    ring = RingObject(group)
    module = _decode_module(group, job["module"])
    q = twisted_unit(ring, _decode_endo(group, job.get("source_twist")))
    p = twisted_unit(ring, _decode_endo(group, job.get("target_twist")))
    matrix = _decode_matrix(group, job["endomorphism"])
    cell = TwoCell(hcompose(q, module), hcompose(module, p), matrix)
    fast = hattori_stallings_trace(cell, q=q, p=p)
    result = {"trace": _shadow_map_table(fast)}
    oracle = None
    if with_oracle:
        w = canonical_dual(module)
        categorical = trace(cell, w, q=q, p=p)
        agrees = categorical.equals(fast)
        oracle = {
            "method": "five-step categorical composite",
            "trace": _shadow_map_table(categorical),
            "agrees": agrees,
        }
    return result, oracle


def _run_euler(job, with_oracle):
    group = _decode_group(job["group"])
    module = _decode_module(group, job["module"])
    chi = euler_characteristic(module)
    result = {"euler": _shadow_map_table(chi)}
    oracle = None
    if with_oracle:
        fast = hattori_stallings_trace(TwoCell.identity(module))
        oracle = {
            "method": "Hattori-Stallings diagonal classes",
            "agrees": chi.equals(fast),
        }
    return result, oracle


def _decode_ring_hom(job):
    big = _decode_group(job["group"])
    small = _decode_group(job["subgroup"])
    hom = GroupHom(small, big, [img for img in job["subgroup_images"]])
    return RingHom(RingObject(small), RingObject(big), hom)


def _run_transfer(job, with_oracle):
    f = _decode_ring_hom(job)
    data = base_change_pair(f)
    res = restriction(f)
    trf = transfer(f, data)
    comp, chi, agree = restriction_transfer_composite(f, "res∘trf")
    result = {
        "restriction": _shadow_map_table(res),
        "transfer": _shadow_map_table(trf),
        "res_then_trf": _shadow_map_table(comp),
        "composite_is_chi": agree,
    }
    oracle = None
    if with_oracle:
        # element-level induced representation oracle for the transfer
        a, c = f.dom.base, f.cod.base
        reps = data.transversal
        cls_a = hochschild_twisted_classes(a, GroupHom.identity_hom(a))
        cls_c = hochschild_twisted_classes(c, GroupHom.identity_hom(c))
        table = []
        agrees = True
        preimage = {f.apply(h): h for h in a.elements()}
        for label in cls_c.labels():
            g = cls_c.representative(label)
            coeffs: dict = {}
            for i, rep in enumerate(reps):
                y = c.mul(c.inv(rep), c.mul(g, rep))
                if y in preimage:
                    lab = cls_a.class_of(preimage[y])
                    coeffs[lab] = coeffs.get(lab, 0) + 1
            expected = trf.on_label(label)
            got = {cls_a.label_name(l): v for l, v in coeffs.items()}
            want = {expected.presentation.label_name(l): v for l, v in expected.coeffs.items()}
            if got != want:
                agrees = False
            table.append({"from": cls_c.label_name(label),
                          "to": [{"class": k, "coeff": got[k]} for k in sorted(got)]})
        oracle = {"method": "coset-conjugation enumeration", "transfer": table, "agrees": agrees}
    return result, oracle


def _run_twisted_transfer(job, with_oracle):
    f = _decode_ring_hom(job)
    j = _decode_endo(f.dom.base, job["j"])
    k = _decode_endo(f.cod.base, job["k"])
    data = base_change_pair(f)
    tt = twisted_transfer(f, j, k, data)
    result = {"twisted_transfer": _shadow_map_table(tt)}
    oracle = None
    if with_oracle:
        plain = twisted_transfer(f, GroupHom.identity_hom(f.dom.base),
                                 GroupHom.identity_hom(f.cod.base), data)
        trf = transfer(f, data)
        oracle = {
            "method": "untwisted degeneration equals the ordinary transfer",
            "agrees": plain.equals(trf),
        }
    return result, oracle


def _run_reidemeister(job, with_oracle):
    if job["kind"] == "circle":
        if "degree" not in job:
            raise SchemaError("circle jobs need a degree")
        cx, cm = circle_self_map(job["degree"])
    else:
        if "matrix" not in job:
            raise SchemaError("torus jobs need a matrix")
        cx, cm = torus2_self_map(job["matrix"])
    res = reidemeister_trace(cx, cm)
    trace_doc = [
        {"class": res.classes.label_name(l), "coeff": res.trace[l]}
        for l in sorted(res.trace, key=lambda l: res.classes.label_name(l))
    ]
    result = {"L": res.lefschetz, "N": res.nielsen, "R": trace_doc}
    oracle = None
    if with_oracle:
        l2 = lefschetz_via_homology(cx, cm)
        oracle = {"method": "rational homology trace", "L": l2, "agrees": l2 == res.lefschetz}
    return result, oracle


def _run_nerve_pi0(job, with_oracle):
    group = _decode_group(job["group"])
    twist = _decode_endo(group, job["twist"])
    roots, bijection = nerve_pi0(group, twist)
    result = {
        "components": [group.element_name(r) for r in roots],
        "count": len(roots),
    }
    oracle = None
    if with_oracle:
        classes = twisted_conjugacy_classes(group, twist)
        oracle = {
            "method": "twisted conjugacy orbit enumeration",
            "count": classes.class_count(),
            "agrees": classes.class_count() == len(roots) and bijection is not None,
        }
    return result, oracle


def _run_morita_check(job, with_oracle):
    group = _decode_group(job["group"])
    ring = RingObject(group)
    n = job["n"]
    w = matrix_morita(ring, n)
    pres = shadow(unit_bimodule(RingObject(group, n)))
    chi1 = euler_characteristic(w.pair1.m, w.pair1)
    chi2 = euler_characteristic(w.pair2.m, w.pair2)
    result = {
        "dual_pairs_valid": verify_dual_pair(w.pair1) and verify_dual_pair(w.pair2),
        "inverse_identities": verify_morita(w),
        "hh0_rank_matrix_ring": len(pres.labels()),
        "chi_composites_identity": (
            chi1.compose(chi2).is_identity() and chi2.compose(chi1).is_identity()
        ),
    }
    oracle = None
    if with_oracle:
        base_rank = len(shadow(unit_bimodule(ring)).labels())
        oracle = {
            "method": "HH0 of the base ring",
            "rank": base_rank,
            "agrees": base_rank == result["hh0_rank_matrix_ring"],
        }
    return result, oracle


_HANDLERS = {
    "hh0": _run_hh0,
    "trace": _run_trace,
    "euler": _run_euler,
    "transfer": _run_transfer,
    "twisted-transfer": _run_twisted_transfer,
    "reidemeister": _run_reidemeister,
    "nerve-pi0": _run_nerve_pi0,
    "morita-check": _run_morita_check,
}


def run_job(job: dict, with_oracle: bool = False) -> dict:
    """Validate and execute one job document; returns the output document."""
    command = job.get("command")
    if command not in SCHEMAS:
        raise SchemaError(f"unknown command {command!r}")
    try:
        jsonschema.validate(job, SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message) from exc
    result, oracle = _HANDLERS[command](job, with_oracle)
    doc = {"command": command, "result": result}
    if oracle is not None:
        doc["oracle"] = oracle
    return doc


def _render(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="compute",
        description="exact shadow, trace and fixed-point computations over group rings",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--schema", metavar="COMMAND", choices=COMMANDS,
                        help="print the input schema for a command and exit")
    parser.add_argument("command", nargs="?", choices=COMMANDS)
    parser.add_argument("--in", dest="infile", metavar="FILE", help="job document (JSON)")
    parser.add_argument("--oracle", action="store_true",
                        help="re-run through the independent brute-force route")
    parser.add_argument("--out", dest="outfile", metavar="FILE")
    args = parser.parse_args(argv)

    if args.schema:
        sys.stdout.write(_render(SCHEMAS[args.schema]))
        return 0
    if not args.command or not args.infile:
        parser.error("a command and --in FILE are required")

    try:
        with open(args.infile) as fh:
            job = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: cannot read job document: {exc}\n")
        return 2
    if isinstance(job, dict) and "command" not in job:
        job["command"] = args.command
    elif isinstance(job, dict) and job.get("command") != args.command:
        sys.stderr.write("error: job document command differs from the CLI command\n")
        return 2

    try:
        doc = run_job(job, with_oracle=args.oracle)
    except SchemaError as exc:
        sys.stderr.write(f"error: {exc.code}: {exc}\n")
        return 2
    except AlgebraError as exc:
        sys.stderr.write(f"error: {exc.code}: {exc}\n")
        return 3

    text = _render(doc)
    if args.outfile:
        with open(args.outfile, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if args.oracle and not _oracle_agrees(doc):
        sys.stderr.write("error: OracleMismatch: independent route disagrees\n")
        return 4
    return 0


def _oracle_agrees(doc: dict) -> bool:
    oracle = doc.get("oracle")
    return oracle is None or bool(oracle.get("agrees", True))


if __name__ == "__main__":
    sys.exit(main())
