from setuptools import setup, find_packages

setup(
    name="virtual-extensions",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "pandas>=2.1.0",
        "numpy>=1.24.0",
        "joblib>=1.3.0",
        "pydantic>=2.0",
        "python-dotenv>=1.0.0",
        "loguru>=0.7.0",
        "sympy>=1.12",
        "mpmath>=1.3.0",
    ],
    extras_require={
        "test": ["pytest>=7.0", "hypothesis>=6.0"],
    },
    entry_points={
        "console_scripts": [
            "virtual-ext=src.cli.main:main",
        ],
    },
    description="Exact arithmetic on virtual extensions and a finite-model checker for their transfer rules",
    python_requires=">=3.10",
)
