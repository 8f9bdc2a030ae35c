"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension: polyergo.backend
falls back to the NumPy implementations in polyergo._corepy when the
compiled module is absent.  The extension is therefore marked optional so
that a missing C toolchain does not break installation.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "polyergo._core",
                ["src/polyergo/_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

# Name and layout are restated here so legacy setup.py code paths that do
# not read pyproject.toml still resolve the src/ layout correctly.
setup(
    name="polyergo",
    package_dir={"": "src"},
    packages=["polyergo"],
    ext_modules=ext_modules,
)
