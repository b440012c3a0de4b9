import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

with open("requirements.txt", "r") as req:
    reqs = req.read().splitlines()

setuptools.setup(
    name="camforge",
    version="0.1.0",
    description="Roller-track synthesis for nonlinear restoring forces.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
    ],
    install_requires=reqs,
    entry_points={
        "console_scripts": ["camforge=src.main:main"],
    },
    python_requires='>=3.8',
)
