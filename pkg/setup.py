from setuptools import find_packages
from setuptools import setup


setup(
    name='polariton-beats',
    description='Photon-count beatings of collective light-matter models',
    license='MIT',
    version='0.1',
    zip_safe=True,
    include_package_data=True,
    packages=find_packages(exclude=('tests',)),
    entry_points={'console_scripts': (
        'beat-lab=polariton_beats.cli:cli',

        'beat-lab-presets=polariton_beats.'
        'lab.experiments:cli',
    )})
