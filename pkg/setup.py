"""Build hook for the optional compiled kernels.

Metadata lives in pyproject.toml. If Cython or a C compiler is missing
the package installs without the extension and uses the numpy kernels.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("sloshing._kernels", ["src/sloshing/_kernels.pyx"], optional=True)],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
