"""Wire formats shared by the library and the CLI.

Complex numbers travel as "a+bi" with 17 significant digits, which is
enough to round-trip doubles exactly.  Scan grids are emitted as CSV plus
a binary PGM (P5) whose gray levels are fixed per class:

    undecided                 0
    attracting_or_parabolic   85
    eventually_constant       170
    escaping                  255
"""

import json

from .errors import FormatError
from .numerics import (
    ATTRACTING_OR_PARABOLIC,
    ESCAPING,
    EVENTUALLY_CONSTANT,
    UNDECIDED,
)

GRAY_LEVELS = {
    UNDECIDED: 0,
    ATTRACTING_OR_PARABOLIC: 85,
    EVENTUALLY_CONSTANT: 170,
    ESCAPING: 255,
}


def format_real(x):
    return "%.17g" % float(x)


def format_complex(z):
    z = complex(z)
    return "%.17g%+.17gi" % (z.real, z.imag)


def parse_complex(text):
    """Inverse of format_complex; also accepts plain reals."""
    raw = text.strip().replace(" ", "")
    if not raw:
        raise FormatError("empty complex literal")
    if raw.endswith("i"):
        raw = raw[:-1] + "j"
    try:
        return complex(raw)
    except ValueError:
        raise FormatError("cannot parse complex literal %r" % text) from None


def ray_samples_to_csv(samples):
    """CSV of parameter-ray samples: t, Re lambda, Im lambda, residual."""
    lines = ["t,re_lambda,im_lambda,residual"]
    for sample in samples:
        lines.append(",".join([
            format_real(sample.t),
            format_real(sample.lam.real),
            format_real(sample.lam.imag),
            format_real(sample.residual),
        ]))
    return "\n".join(lines) + "\n"


def scan_to_csv(scan):
    lines = ["re,im,class"]
    for row in scan.rows():
        lines.append("%s,%s,%s" % (format_real(row[0]), format_real(row[1]), row[2]))
    return "\n".join(lines) + "\n"


def scan_to_pgm(scan):
    header = "P5\n%d %d\n255\n" % (scan.width, scan.height)
    body = bytearray()
    for j in range(scan.height):
        for i in range(scan.width):
            body.append(GRAY_LEVELS[scan.grid[j][i].tag])
    return header.encode("ascii") + bytes(body)


def psf_parameter_to_dict(p):
    return {
        "lambda": format_complex(p.lam),
        "address": str(p.address_class.representative),
        "members": [str(m) for m in p.address_class.members],
        "kneading": str(p.address_class.kneading),
        "l": p.l,
        "k": p.k,
        "orbit_period": p.orbit_period,
        "newton_residual": p.newton_residual,
        "landing_gap": p.landing_gap,
        "dynamic_landing_residual": p.dynamic_landing_residual,
    }


def psf_parameter_to_json(p):
    return json.dumps(psf_parameter_to_dict(p), indent=2, sort_keys=True) + "\n"


def psf_parameter_from_json(text):
    """Reader for the find-lambda JSON output; returns a plain dict with
    the lambda coerced back to complex."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError("not valid JSON: %s" % exc) from None
    for key in ("lambda", "address", "l", "k"):
        if key not in doc:
            raise FormatError("missing field %r" % key)
    doc["lambda"] = parse_complex(doc["lambda"])
    return doc
