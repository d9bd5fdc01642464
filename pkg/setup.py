from setuptools import setup

setup(
    name="SkewHopf",
    version="0.1.0",
    python_requires=">=3.8",
    description="Free Hopf algebras on triangular skew coalgebra chains, by noncommutative rewriting",
    packages=['SkewHopf', 'SkewHopf.lib', 'SkewHopf.jobs'],
    package_data={'': ['logging.config']}, # manually include extra files
    install_requires=[
        'gmpy2>=2.1.5',
        'sympy>=1.9'
    ],
    extras_require={
        'test': ['pytest>=7.0']
    },
    entry_points={
        'console_scripts': ['skewhopf=SkewHopf.cli:main']
    }
)
