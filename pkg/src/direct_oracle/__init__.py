from src.direct_oracle.revolution import (
    ComparisonReport,
    RevolutionGrid,
    RevolutionSystem,
    assemble_revolution,
    compare_with_assembler,
    revolution_steklov,
    warped_spec_of,
)
