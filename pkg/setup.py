from setuptools import setup, find_packages

setup(
    name="fermiswap",
    version="0.1.0",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "PyYAML>=6.0",
        "pydantic>=2.0",
        "jsonschema>=4.0",
        "colorlog>=6.0",
        "typer>=0.9",
        "rich>=13.0",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    python_requires=">=3.8",
    entry_points={
        "console_scripts": [
            "fermiswap=fermiswap.main:main",
        ],
    },
)
