"""This module defines the Z2Matrix model: a bit-packed matrix over GF(2).
"""


class Z2Matrix:
    """Matrix over Z2 stored as one integer bitmask per column.

    Bit i of a column is the entry in row i. Rows and columns are indexed by
    simplices in canonical order, so reduced forms are deterministic.

    Attributes:
        rows (tuple): Row labels (the (d-1)- or d-simplices).
        cols (tuple): Column labels.
        columns (list): Column bitmasks.
    """

    def __init__(self, rows, cols, columns):
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        self.columns = list(columns)
        self.row_index = {label: i for i, label in enumerate(self.rows)}
        self._basis = None

    @classmethod
    def boundary_matrix(cls, complex_, dim):
        """Matrix of the boundary map from dim-chains to (dim-1)-chains."""
        rows = complex_.simplices_of_dim(dim - 1) if dim > 0 else ()
        cols = complex_.simplices_of_dim(dim)
        index = {s: i for i, s in enumerate(rows)}
        columns = []
        for simplex in cols:
            column = 0
            if dim > 0:
                for face in simplex.faces():
                    column |= 1 << index[face]
            columns.append(column)
        return cls(rows, cols, columns)

    def vector(self, labels):
        """Bitmask over the rows for a set of row labels."""
        mask = 0
        for label in labels:
            mask |= 1 << self.row_index[label]
        return mask

    def labels(self, mask):
        return [label for i, label in enumerate(self.rows) if mask >> i & 1]

    def _column_basis(self):
        """Echelon basis of the column space, keyed by lowest set bit."""
        if self._basis is None:
            basis = {}
            for column in self.columns:
                reduced = self._reduce_with(basis, column)
                if reduced:
                    basis[reduced & -reduced] = reduced
            self._basis = basis
        return self._basis

    @staticmethod
    def _reduce_with(basis, vector):
        while vector:
            pivot = vector & -vector
            row = basis.get(pivot)
            if row is None:
                return vector
            vector ^= row
        return 0

    def reduce(self, vector):
        """Remainder of a row-space vector modulo the column space; 0 iff in the span."""
        return self._reduce_with(self._column_basis(), vector)

    def in_column_space(self, vector):
        return self.reduce(vector) == 0

    def rank(self):
        return len(self._column_basis())

    def kernel_basis(self):
        """Basis of the null space as bitmasks over the columns, in column order."""
        basis = {}
        kernel = []
        for j, column in enumerate(self.columns):
            vector, combo = column, 1 << j
            while vector:
                pivot = vector & -vector
                if pivot not in basis:
                    break
                row, row_combo = basis[pivot]
                vector ^= row
                combo ^= row_combo
            if vector:
                basis[vector & -vector] = (vector, combo)
            else:
                kernel.append(combo)
        return kernel

    def __repr__(self):
        return f'Z2Matrix({len(self.rows)}x{len(self.cols)})'
