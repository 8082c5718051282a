"""Kernel selection: compiled extension when available, pure Python otherwise.

Set QHOPF_KERNEL=py to force the reference implementation (used by the
benchmark and the kernel-equivalence tests), QHOPF_KERNEL=cy to require the
compiled one.
"""

import os

_choice = os.environ.get("QHOPF_KERNEL", "").strip().lower()

if _choice in ("py", "pure", "python"):
    from . import _kernel_py as impl
elif _choice in ("cy", "c", "fast"):
    from . import _kernel_cy as impl  # type: ignore[no-redef]
else:
    try:
        from . import _kernel_cy as impl  # type: ignore[no-redef]
    except ImportError:
        from . import _kernel_py as impl

IMPL = impl.IMPL
FIELD_MASK = impl.FIELD_MASK
Q_SHIFT = impl.Q_SHIFT
S_SHIFT = impl.S_SHIFT

pack = impl.pack
unpack = impl.unpack
key_degree = impl.key_degree
padd = impl.padd
psub = impl.psub
pneg = impl.pneg
pscale = impl.pscale
pmul = impl.pmul
paddmul = impl.paddmul
content = impl.content
pdiv_scalar = impl.pdiv_scalar
mono_min = impl.mono_min
mono_min2 = impl.mono_min2
pshift_down = impl.pshift_down
lead_key = impl.lead_key
