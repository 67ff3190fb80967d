"""Print the interpolated beam-center deformation gradient for every scheme."""

import warnings

import numpy as np

from tensorp.beam import run_table2


def main():
    warnings.simplefilter("ignore")
    np.set_printoptions(precision=4, suppress=True)
    for name, block in run_table2().items():
        print(f"{name:>9}: {block.tolist()}")


if __name__ == "__main__":
    main()
