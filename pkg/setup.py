from setuptools import setup, find_packages

# Read requirements from requirements.txt.
with open('requirements.txt') as f:
    requirements = [line.split('#')[0].strip() for line in f.read().splitlines()]
    requirements = [line for line in requirements if line]

setup(
    name="steklov-warp",
    version="0.1",
    packages=find_packages(exclude=('tests', 'tests.*')),
    install_requires=requirements,
    entry_points={
        'console_scripts': ['steklov-warp = mains.experiments_cli:main'],
    },
    python_requires='>=3.10,<3.13'
)
