# setup.py
from setuptools import setup, find_packages

setup(
    name='SEDIMENTutils',
    version='1.0',
    packages=find_packages(exclude=['tests', 'tests.*']),
    package_data={
        'SEDIMENTutils': [
            'templates/*.j2',
        ],
    },
    include_package_data=True,
    install_requires=[
        'numpy>=1.20',
        'scipy>=1.10',
        'jinja2>=3.1',
        'pyyaml>=6.0',
        'pydantic>=2.0',
        'h5py>=3.0',
        'numba>=0.59',
    ],
    entry_points={
        'console_scripts': [
            'sediment_lab = SEDIMENTutils.cli:main',
        ],
    },
)
