from src.sturm_dtn.provenance import Source, SpectrumEntry, SpectrumWithProvenance, combine, merge_eigenvalues
from src.warped_assembler.assembler import (
    boundary_volume,
    first_above,
    branch_spectrum,
    first_eigenvalues,
    lower_bound_C,
    mesh_for,
    sigma1_construction,
    spectrum_to_frame,
    steklov_spectrum_warped,
)
