use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ray {0} is the zero vector")]
    ZeroRay(usize),
    #[error("cone generated by rays {rays:?} is not strongly convex")]
    NotStronglyConvex { rays: Vec<Vec<i64>> },
    #[error("ray {index} has length {found}, expected rank {expected}")]
    RayLength { index: usize, expected: usize, found: usize },
    #[error("cone {cone} refers to unknown ray {ray}")]
    UnknownRay { cone: usize, ray: usize },
    #[error("not a fan: cones {a:?} and {b:?} meet in a non-face")]
    NotAFan { a: Vec<usize>, b: Vec<usize> },
    #[error("duplicate ray {0} (same primitive direction as an earlier ray)")]
    DuplicateRay(usize),
    #[error("cone is not a codimension-one face pair")]
    NotCodimOneFace,
    #[error("not a face pair")]
    NotAFacePair,
    #[error("cone {0:?} is not in the fan")]
    ConeNotInFan(Vec<usize>),
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("cone set is not locally star closed")]
    NotLocallyStarClosed,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("perversity domain mismatch: {0}")]
    PerversityDomainMismatch(String),
    #[error("perversity inequality violated at cone {0:?}")]
    PerversityInequalityViolated(Vec<usize>),
    #[error("perversities are not pointwise ordered at cone {0:?}")]
    NotPointwiseOrdered(Vec<usize>),
    #[error("element is not homogeneous")]
    ElementNotHomogeneous,
    #[error("objects live on different fans")]
    FanMismatch,
    #[error("subdivision is not a barycentric subdivision")]
    NotBarycentric,
    #[error("not a complex: d^2 != 0 at {0:?}")]
    NotAComplex((i32, i32)),
    #[error("map does not commute with coboundaries at {0}")]
    NotChainMap(String),
    #[error("map is not well defined: {0}")]
    IllDefinedMap(String),
    #[error("input is not a boundary fan of a full-dimensional cone")]
    NotABoundaryFan,
    #[error("unknown check {0}")]
    UnknownCheck(String),
    #[error("integer overflow in lattice computation")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
