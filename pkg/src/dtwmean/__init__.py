"""Time-series averaging under dynamic time warping."""
