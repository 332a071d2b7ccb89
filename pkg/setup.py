from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [Extension("hodgecorr._canon_ext", ["src/hodgecorr/_canon_ext.pyx"])],
        compiler_directives={"language_level": "3"},
    )
)
