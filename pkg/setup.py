"""Build script: compiles the Cython event-loop kernel when possible.

The compiled kernel is optional.  If Cython or a C compiler is missing the
package installs anyway and falls back to the pure-Python kernel at import
time (see aoisim.engine).  Build in place with:

    python setup.py build_ext --inplace
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Swallow extension build failures so the pure-Python install survives."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: skipping compiled kernel ({exc!r}); "
                  "pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: could not compile {ext.name} ({exc!r}); "
                  "pure-Python fallback will be used")


def extensions():
    import os
    if not os.path.exists("src/aoisim/_kernel_cy.pyx"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "aoisim._kernel_cy",
        sources=["src/aoisim/_kernel_cy.pyx"],
    )
    return cythonize([ext], language_level="3")


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
