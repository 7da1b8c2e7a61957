#!/usr/bin/env python3
"""
Setup script for Frontlab
"""

from setuptools import setup, find_packages

# Read the README file
def read_readme():
    with open("README.md", "r", encoding="utf-8") as fh:
        long_description = fh.read()
    return long_description

# Read requirements
def read_requirements():
    with open("requirements.txt", "r", encoding="utf-8") as fh:
        requirements = [line.strip() for line in fh if line.strip() and not line.startswith("#")]
    return requirements

setup(
    name="frontlab",
    version="1.0.0",
    description="Bistable front propagation through perforated walls: blocking, propagation and barrier certificates",
    long_description=read_readme(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    py_modules=["config", "exceptions", "main_frontlab"],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.9",
    install_requires=read_requirements(),
    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "pytest-cov>=4.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "frontlab=main_frontlab:cli",
        ],
    },
    include_package_data=True,
    package_data={
        "scenarios": ["bundled/*.json"],
    },
    keywords=[
        "reaction-diffusion",
        "bistable",
        "traveling-wave",
        "front-propagation",
        "obstacle",
        "finite-difference",
        "variational-barrier",
    ],
    platforms=["any"],
    zip_safe=False,
)
