"""Back end: instruction words, assembly text, and the ELFQ container."""

from .asm import emit_asm, emit_module_asm
from .elfq import (
    DEFAULT_ALIGN, ElfqImage, QbbRecord, build_image, inspect_dict, inspect_elfq, read_elfq, write_elfq,
)
from .encoding import (
    apply_patches, decode_kernel, encode_instr, encode_kernel, find_patch_sites, opcode_table,
)

__all__ = [
    "DEFAULT_ALIGN", "ElfqImage", "QbbRecord", "apply_patches", "build_image", "decode_kernel",
    "emit_asm", "emit_module_asm", "encode_instr", "encode_kernel", "find_patch_sites",
    "inspect_dict", "inspect_elfq", "opcode_table", "read_elfq", "write_elfq",
]
