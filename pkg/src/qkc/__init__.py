"""qkc: a hybrid quantum-classical kernel compiler, ELFQ toolchain and runtime."""

__version__ = "0.1.0"
