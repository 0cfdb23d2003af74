from src.eigencore.jacobi import Eigen, SymMatrix, round_robin, sym_eig
from src.eigencore.schur import (
    InteriorFactor,
    PartitionedSystem,
    bandwidth,
    dtn_eigen,
    dtn_matrix,
    schur_complement,
)
