from __future__ import annotations

from ..errors import KernelTooLarge, RecursiveKernelCall
from ..frontend.lower import MAX_KERNEL_SIZE
from ..ir.module import Call, QKernel, QModule


def inline_kernels(m: QModule) -> QModule:
    """Flatten every kernel into a straight-line instruction list.

    All kernels are kept, so helper kernels stay addressable as their own
    quantum basic blocks next to the composite kernels that inline them.
    """
    by_name = {k.name: k for k in m.kernels}
    done: dict[str, list] = {}

    def flat(name: str, stack: list[str]) -> list:
        if name in done:
            return done[name]
        if name in stack:
            raise RecursiveKernelCall(stack[stack.index(name):] + [name])
        if name not in by_name:
            raise KeyError(f"call to unknown kernel {name!r}")
        out: list = []
        for op in by_name[name].body:
            if isinstance(op, Call):
                out.extend(flat(op.kernel, stack + [name]))
            else:
                out.append(op)
            if len(out) > MAX_KERNEL_SIZE:
                raise KernelTooLarge(f"kernel {name!r} exceeds {MAX_KERNEL_SIZE} instructions after inlining")
        done[name] = out
        return out

    kernels = []
    for k in m.kernels:
        body = list(flat(k.name, []))
        kernels.append(QKernel(k.name, body, inlined=True, mapped=k.mapped,
                               scheduled=False, start_times=None, placement=k.placement))
    return QModule(dict(m.qbits), dict(m.cbits), dict(m.params), kernels, m.target)
