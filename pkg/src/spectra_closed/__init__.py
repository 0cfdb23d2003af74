from src.spectra_closed.closed_spectrum import (
    ClosedSpectrum,
    circle_spectrum,
    count_up_to,
    explicit_spectrum,
    first_values,
    flat_torus_spectrum,
    point_spectrum,
    spectrum_from_record,
    truncate_below,
)
