"""Exception types shared across the package."""


class DegenerateChannelError(ValueError):
    """A channel parameter combination on which a bound formula is undefined.

    Raised for zero interference-to-noise ratios in the inner bound (the
    correlation domain and several coefficient ratios are undefined there)
    and for zero forward SNRs in the outer-bound terms that divide by them.
    """
