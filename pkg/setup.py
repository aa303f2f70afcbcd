# Builds the optional compiled orbit kernel.  The package works without it:
# rotorlab.kernel falls back to the pure-Python twin when the extension is
# missing.  Build in place with:  python setup.py build_ext --inplace
from setuptools import setup

ext_modules = []
try:
    from setuptools import Extension
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("rotorlab._orbit", ["src/rotorlab/_orbit.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    pass

setup(ext_modules=ext_modules)
