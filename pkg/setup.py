"""Build the optional Cython point-counting kernel.

The package works without it: ``planejets.algebra.counting`` falls back to a
pure-Python kernel when the extension cannot be imported.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "planejets.algebra._count_fast",
                ["src/planejets/algebra/_count_fast.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
