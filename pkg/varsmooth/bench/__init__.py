"""Benchmark applications (sparse PCA, sparse spectral clustering) and their runners."""
