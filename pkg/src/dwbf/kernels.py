"""Backend dispatch for the hot decoder kernels.

Set ``DWBF_NUMBA=0`` in the environment to force the pure-numpy fallback;
anything else (or an importable numba) selects the compiled kernels.  Both
backends implement the same reduction orders and give bit-identical results;
``benchmarks/bench_backends.py`` compares their throughput.
"""

import os

_flag = os.environ.get("DWBF_NUMBA", "auto").strip().lower()

if _flag in ("0", "off", "false", "no"):
    from . import _kernels_np as _impl

    NUMBA_ENABLED = False
else:
    try:
        from . import _kernels_nb as _impl

        NUMBA_ENABLED = True
    except ImportError:
        from . import _kernels_np as _impl

        NUMBA_ENABLED = False


def backend_name():
    return "numba" if NUMBA_ENABLED else "numpy"


syndrome = _impl.syndrome
row_min = _impl.row_min
row_argmin_first = _impl.row_argmin_first
row_argmax_first = _impl.row_argmax_first
row_excl_min = _impl.row_excl_min
accumulate_columns = _impl.accumulate_columns
update_weight_rows = _impl.update_weight_rows
ucn_counts = _impl.ucn_counts
fs_counts = _impl.fs_counts
fi_accumulate = _impl.fi_accumulate
nms_cn_update = _impl.nms_cn_update
nms_vn_update = _impl.nms_vn_update
