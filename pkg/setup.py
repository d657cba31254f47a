from setuptools import setup, find_packages

long_description = '''
nullframes is a numerical engine for the geometry of null hypersurfaces in Lorentzian manifolds.

It builds normalized null frames (a null normal, a null transversal and a screen distribution) along parametrized
null hypersurfaces, evaluates the screen and radical shape operators by finite differences, and checks the
structural results that relate them: Codazzi type identities, quasi-conformal screens, screen principal directions
and the constant angle property with respect to closed conformal vector fields.

Configurations are JSON files validated with Cerberus, or entries of the shipped catalog of hypersurfaces in Minkowski,
de Sitter, anti de Sitter and generalized Robertson-Walker spacetimes.

nullframes is compatible with Python 3.7.
'''

with open('requirements.txt') as f:
    install_requires = f.read().splitlines()

with open('docs/requirements.txt') as f:
    docs_requires = f.read().splitlines()

setup(
    name='nullframes',
    version='20.10.0',
    description='Null frames, shape operators and structural checks for null hypersurfaces',
    long_description=long_description,
    license='Apache License Version 2.0',
    author='Curtin University',
    packages=find_packages(exclude=['tests', 'tests.*']),
    package_data={'nullframes': ['schema/*.json']},
    keywords=['differential geometry', 'null hypersurfaces', 'lorentzian manifolds', 'general relativity'],
    install_requires=install_requires,
    extras_require={
        'docs': docs_requires
    },
    entry_points={
        'console_scripts': [
            'nullframes = nullframes.cli.nullframes:cli'
        ]
    },
    classifiers=[
        "Development Status :: 2 - Pre-Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3 :: Only",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Physics"
    ],
    python_requires='>=3.7'
)
