from setuptools import find_packages, setup

setup(
    name="pebble-ltl",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"pebble": ["samples/*"]},
    python_requires=">=3.10",
    install_requires=[
        "lark>=1.1.0",
        "pandas>=2.0.0",
    ],
    entry_points={"console_scripts": ["pebble = pebble.cli:main"]},
)
