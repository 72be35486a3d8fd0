"""Shared fixtures: benchmark CSV files materialized once per session."""

import numpy as np
import pytest
from sklearn.datasets import load_iris, load_wine

from specens.dataset import Dataset, save_csv


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    """Directory holding iris.csv and wine.csv with a 'label' column."""
    root = tmp_path_factory.mktemp("data")
    for name, loader in (("iris", load_iris), ("wine", load_wine)):
        bunch = loader()
        ds = Dataset(np.asarray(bunch.data, dtype=float), np.asarray(bunch.target), name=name)
        save_csv(ds, root / f"{name}.csv")
    return root
