"""Named decoder configurations.

Two reference codes are used throughout: code1 is a (4,6)-regular rate-1/3
code of length 816 and code2 is the (32,32)-regular rate-781/1023
Euclidean-geometry code of length 1023.  Scalar settings were tuned per
code, so every preset name carries a code suffix.  ``preset(name)`` returns
a fresh ``DecoderConfig``.
"""

from .engine import DecoderConfig

_P = {}


def _add(name, **kw):
    _P[name] = kw


# gradient-descent family
_add("gdbf-code1", ff_kind="gdbf", fbs_kind="single", alpha3=1.0)
_add("gdbf-code2", ff_kind="gdbf", fbs_kind="single", alpha3=1.0)
_add("hgdbf-code1", ff_kind="gdbf", fbs_kind="m1", alpha3=1.0)
_add("hgdbf-code2", ff_kind="gdbf", fbs_kind="m1", alpha3=1.0 / 17.0)
_add("m2-gdbf-code1", ff_kind="gdbf", fbs_kind="m2", alpha3=1.0, delta_fi=1)
_add("m2-gdbf-code2", ff_kind="gdbf", fbs_kind="m2", alpha3=1.0 / 17.0,
     delta_fi=10)

# static-weight family
_add("imwbf-code1", ff_kind="imwbf", fbs_kind="single", alpha1=0.2)
_add("imwbf-code2", ff_kind="imwbf", fbs_kind="single", alpha1=1.8)
_add("amwbf-code1", ff_kind="mwbf", fbs_kind="threshold_adaptive",
     alpha1=0.2)
_add("amwbf-code2", ff_kind="mwbf", fbs_kind="threshold_adaptive",
     alpha1=1.8)
_add("ipwbf-code1", ff_kind="imwbf", fbs_kind="pwbf", alpha1=0.2, delta_fs=1)
_add("ipwbf-code2", ff_kind="imwbf", fbs_kind="pwbf", alpha1=1.8,
     delta_fs=10)
_add("m2-imwbf-code1", ff_kind="imwbf", fbs_kind="m2", alpha1=0.2,
     delta_fi=5)
_add("m2-imwbf-code2", ff_kind="imwbf", fbs_kind="m2", alpha1=3.2,
     delta_fi=16)

# dynamic-weight family, single-bit flipping
_add("s-dwbf-a-code1", ff_kind="dwbf", fbs_kind="single", schedule="swus_a",
     alpha2=0.68)
_add("s-dwbf-b-code1", ff_kind="dwbf", fbs_kind="single", schedule="swus_b",
     alpha2=0.44)
_add("s-dwbf-f-code1", ff_kind="dwbf", fbs_kind="single", schedule="fwus",
     alpha2=0.35)
_add("s-dwbf-a-code2", ff_kind="dwbf", fbs_kind="single", schedule="swus_a",
     alpha2=0.33)
_add("s-dwbf-b-code2", ff_kind="dwbf", fbs_kind="single", schedule="swus_b",
     alpha2=0.12)

# dynamic-weight family, multi-bit flipping
_add("m1-dwbf-a-code1", ff_kind="dwbf", fbs_kind="m1", schedule="swus_a",
     alpha2=0.7, delta=0.0)
_add("m1-dwbf-b-code1", ff_kind="dwbf", fbs_kind="m1", schedule="swus_b",
     alpha2=0.35, delta=0.0)
_add("m1-dwbf-a-code2", ff_kind="dwbf", fbs_kind="m1", schedule="swus_a",
     alpha2=0.33, delta=0.0)
_add("m1-dwbf-b-code2", ff_kind="dwbf", fbs_kind="m1", schedule="swus_b",
     alpha2=0.3, delta=0.0)
_add("m2-dwbf-a-code1", ff_kind="dwbf", fbs_kind="m2", schedule="swus_a",
     alpha2=0.58, delta_fi=1)
_add("m2-dwbf-b-code1", ff_kind="dwbf", fbs_kind="m2", schedule="swus_b",
     alpha2=0.35, delta_fi=1, loop_breaker=False)
_add("m2-dwbf-a-code2", ff_kind="dwbf", fbs_kind="m2", schedule="swus_a",
     alpha2=0.33, delta_fi=4)
_add("m2-dwbf-b-code2", ff_kind="dwbf", fbs_kind="m2", schedule="swus_b",
     alpha2=0.3, delta_fi=1, loop_breaker=False)

# soft-decision reference
_add("nms-code1", ff_kind="nms")
_add("nms-code2", ff_kind="nms")


def preset_names():
    return sorted(_P)


def preset(name, **overrides):
    """Fresh DecoderConfig for a named preset, with optional overrides."""
    try:
        kw = dict(_P[name])
    except KeyError:
        raise KeyError(
            f"unknown preset {name!r}; known: {', '.join(sorted(_P))}")
    kw.update(overrides)
    return DecoderConfig(**kw)
