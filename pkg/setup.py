from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    # The extension is an optional accelerator; refden.backend falls back to
    # the numpy kernels when the build is unavailable.
    extensions = cythonize(
        [
            Extension(
                "refden._kernels",
                ["src/refden/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(ext_modules=extensions)
