# Notes on packaging
# https://packaging.python.org/tutorials/distributing-packages/#platform-wheels
#
# python setup.py sdist bdist_wheel
# pip install -e .[test] && pytest

from setuptools import setup, find_packages

setup(
    name='freeboundary',
    version='2026.10.17',
    description='Boundary symbol, dispersion relation and function-space numerics for two-phase free-boundary flow',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    packages=find_packages(exclude=['tests', 'examples', 'examples.*']),
    zip_safe=True,
    python_requires='>=3.9',
    install_requires=['numpy', 'scipy', 'torch>=2.0'],
    extras_require={'test': ['pytest']},
    entry_points={'console_scripts': ['freeboundary=freeboundary.cli.main:main']},
)
