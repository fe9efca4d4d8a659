"""CMake-driven extension build: configures the C++ project with the Python
bindings enabled and drops the compiled module into the package."""

import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent

        import pybind11

        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DSLOPEFLOW_PYTHON=ON",
                "-DCMAKE_BUILD_TYPE=Release",
                f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
                f"-DPYTHON_EXECUTABLE={sys.executable}",
                f"-DSLOPEFLOW_MODULE_OUTPUT_DIR={out_dir}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_slopeflow", "-j"],
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("slopeflow_py._slopeflow")],
    cmdclass={"build_ext": CMakeBuild},
)
