from setuptools import Extension, setup

ext_modules = [
    Extension(
        "greedyselect._kernels",
        sources=["src/greedyselect/_kernels.pyx"],
        extra_compile_args=["-O3"],
    )
]

if __name__ == "__main__":
    from Cython.Build import cythonize

    setup(ext_modules=cythonize(ext_modules, language_level="3"))
