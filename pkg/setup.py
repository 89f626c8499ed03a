#!/usr/bin/python
# -*- coding: utf-8 -*-
from setuptools import setup


README = ''
try:
    with open('README.rst') as readme_file:
        README = readme_file.read()
except IOError:
    pass

REQUIRES = ['chardet', 'Flask>=2.2', 'httpx']

setup(name='protomon',
      version='0.1.0',
      packages=['protomon'],
      package_data={'protomon': ['specs/*.rml']},
      description="Runtime verification of agent interaction protocols",
      long_description=README,
      install_requires=REQUIRES,
      python_requires='>=3.7',
      entry_points={'console_scripts': ['protomon = protomon.commands:main']},
      license="GPLv3",
      platforms=["Independent"],
      keywords="runtime verification monitor multi-agent protocol",
      classifiers=[
          "Development Status :: 3 - Alpha",
          "Intended Audience :: Developers",
          "License :: OSI Approved :: GNU General Public License (GPL)",
          "Operating System :: OS Independent",
          "Programming Language :: Python :: 3",
          "Topic :: Software Development :: Testing",
          "Topic :: Software Development :: Libraries",
      ]
)
