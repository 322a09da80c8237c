"""ellsplit: splitness decisions and certified unbounded-height points on
powers of an elliptic curve (torus model for the full geometry, elliptic
model for heights)."""

from .curves import (
    CurvePoint,
    EllipticCurve,
    PowerPoint,
    add,
    apply_morphism,
    curve_37a1,
    curve_j0,
    is_torsion,
    power_point,
    scalar_mul,
    torsion_points,
)
from .endo import (
    Endo,
    EndRing,
    GaussCertificate,
    GaussDecomposition,
    MorphismMatrix,
    RING_EISENSTEIN,
    RING_GAUSS,
    RING_Z,
    complement_to_isogeny,
    gauss_block_decompose,
    hermite_enumerate,
    hermite_normal_form,
    rank,
    verify_gauss_certificate,
)
from .heights import (
    EpsilonBall,
    HeightValue,
    canonical_height,
    canonical_height_doubling,
    canonical_height_series,
    in_epsilon_ball,
    naive_height,
    seminorm,
    set_height,
)
from .ideals import (
    EliminationReport,
    Parameterization,
    RationalMap,
    VarietySpec,
    dimension,
    image_dimension,
    make_elliptic_variety,
    make_torus_variety,
    validate_variety,
)
from .structure import (
    PropertySReport,
    SplitWitness,
    SumCriterionResult,
    build_split_witness,
    check_property_s,
    check_ps_criterion,
    find_dominant_projection,
    refine_failure,
)
from .subgroups import (
    CosetSpec,
    GeneratedSubgroup,
    MembershipRecord,
    SubgroupSpec,
    TORSION,
    drop_to_lower_rank,
    generate_module_points,
    membership,
    product_record,
    search_sr,
)
from .unbounded import (
    BasePointData,
    FibrationData,
    UnboundedCertificate,
    dense_torsion_preimage,
    find_base_point,
    generate_unbounded,
    verify_certificate,
)

__version__ = "0.1.0"
