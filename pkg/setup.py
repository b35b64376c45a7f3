import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="jordan_domains",
    version="0.0.1",
    author="Martin Floor",
    author_email="martinfloor@gmail.com",
    description="Numerical geometry of classical bounded symmetric domains through Jordan triple systems.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="",
    packages=setuptools.find_packages(exclude=['tests', 'examples', 'examples.*']),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires='>=3.7',
    install_requires=[
    'numpy',
    'scipy',
    'pandas',
    ],
    extras_require={
    'test': ['pytest'],
    },
    entry_points={
    'console_scripts': ['jordan-domains=jordan_domains.cli:main'],
    },
)
