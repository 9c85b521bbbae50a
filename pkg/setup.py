from setuptools import find_packages, setup

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [
        line.split("#")[0].strip()
        for line in fh.read().splitlines()
        if line.split("#")[0].strip()
    ]

setup(
    name="cstar",
    version="0.1.0",
    description="A proof-integrated verifier for annotated C programs",
    long_description=long_description,
    long_description_content_type="text/markdown",
    package_dir={"": "src"},
    packages=find_packages(where="src"),
    package_data={"cstar": ["lib/*.h"]},
    include_package_data=True,
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.8",
    install_requires=requirements,
    extras_require={"dev": ["pytest>=7.0", "hypothesis>=6.0"]},
    entry_points={
        "console_scripts": [
            "cstar=cstar.cli:main",
        ],
    },
)
