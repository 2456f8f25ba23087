from pathlib import Path
from typing import Callable

import pytest
from click.testing import CliRunner

from models.models import Matrix
from utils.matrix_io import write_matrix


@pytest.fixture
def sample_matrix() -> Matrix:
    return Matrix([[1, 2], [2, 3]])


@pytest.fixture
def matrix_file(tmp_path: Path) -> Callable[..., str]:
    """Записывает матрицу во временный файл и возвращает путь."""
    counter = {"n": 0}

    def write(rows) -> str:
        counter["n"] += 1
        path = tmp_path / f"m{counter['n']}.csv"
        write_matrix(rows if isinstance(rows, Matrix) else Matrix(rows), path)
        return str(path)

    return write


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()
