"""topsub: exact construction and analysis of Pauli topological subsystem codes
on composite-dimensional qudits.

Subpackages mirror the pipeline: exact residue-ring linear algebra
(`ring_linalg`), generalized Pauli algebra (`pauli_core`), torus geometry
(`lattice_model`), the subsystem-code analyzer (`code_engine`), lattice anyon
extraction (`anyon_lab`), the abstract Abelian anyon calculus (`anyon_theory`),
code constructions (`code_builder`), and the command-line front end (`cli`).
"""

from ._core import BACKEND as core_backend

__version__ = "0.1.0"
__all__ = ["core_backend", "__version__"]
