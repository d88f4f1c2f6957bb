#!/usr/bin/env python3
from setuptools import setup

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="lowhigh",
    version="1.0.0",
    author="The lowhigh authors",
    author_email="",
    description="Incremental dominators and low-high orders for directed flow graphs",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="",
    packages=["lowhigh", "lowhigh.bench"],
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Environment :: Console",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Development Status :: 4 - Beta",
    ],
    python_requires=">=3.8",
    install_requires=[
        "networkx>=2.6",
    ],
    entry_points={
        "console_scripts": [
            "lowhigh=lowhigh.cli:main",
        ],
    },
)
