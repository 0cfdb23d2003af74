from src.sturm_dtn.geometry import BaseGeometry, collar_geometry
from src.sturm_dtn.mesh import MeshSpec, check_resolution, graded_mesh
from src.sturm_dtn.problem import (
    AssembledSturm,
    EndCondition,
    SturmProblem,
    assemble,
    assemble_full,
    constrained_rayleigh_quotient,
    dtn_eigen_sturm,
    dtn_eigenvalues,
    harmonic_extension,
    neumann,
    rayleigh_quotient,
    steklov,
)
from src.sturm_dtn.provenance import (
    Source,
    SpectrumEntry,
    SpectrumWithProvenance,
    combine,
    merge_eigenvalues,
)
from src.sturm_dtn.base_spectrum import base_dtn_spectrum, mode_problem
