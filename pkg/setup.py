"Setup file"

from setuptools import setup


def readme():  # pylint: disable=missing-function-docstring
    with open('README.rst') as file:
        return file.read()


setup(
    name="dglastacks",
    version="1.0",
    description="Exact Maurer-Cartan Computations for Descent and G-Stacks",
    long_description=readme(),
    license="None",
    packages=["dglastacks"],
    zip_safe=False,
    install_requires=["numpy", "sympy", "pyyaml", "cerberus"],
    entry_points={
        "console_scripts": [
            "dglastacks=dglastacks.dglastacks:main",
        ],
    }
)
