"""Per-prime torsion certificates for toric orbifolds, q-CW complexes and
weighted Grassmannians."""

from .charpair import (CharacteristicPair, induced_characteristic, local_group_order,
                       local_group_structure, validate_characteristic)
from .complexes import FaceComplex, build_face_lattice, free_vertices, load_face_poset
from .io import cube_pair, pair_from_dict
from .presentation import emit_presentation, linear_relation_forms, stanley_reisner_generators
from .qcw import (BuildingSequence, CellSpec, analyze_even_building_sequence,
                  analyze_general_building_sequence, betti_if_even_certified,
                  propagate_p_torsion)
from .retraction import (check_bss_condition, enumerate_retraction_sequences,
                         find_prime_compatible_retraction, per_prime_verdict,
                         to_building_sequence)
from .wgrass import WeightVector, grassmann_torsion_report

__version__ = "0.1.0"
