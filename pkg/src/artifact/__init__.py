"""Root arrangements, stratum groupoids, the double incidence category and their verifiers.

Modules: ``rootsys``, ``arrangement``, ``weylact``, ``stratpi1``, ``dic``,
``pcox``, ``glnspecies``, ``orbitcat`` and the ``cli`` front end.
"""

__version__ = "0.1.0"
