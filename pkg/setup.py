"""Setup for mvspace-engine."""

from setuptools import setup, find_packages

setup(
    name="mvspace-engine",
    version="0.1.0",
    description="Exact engine for multi vector spaces over Q and GF(p)",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.10",
    install_requires=[
        "pydantic>=2.0",
        "numpy>=1.24",
        "galois>=0.3",
    ],
    extras_require={
        "dev": ["pytest>=7.0", "hypothesis>=6.0"],
    },
    entry_points={
        "console_scripts": [
            "mvspace=mvspace_engine.__main__:main",
        ],
    },
)
