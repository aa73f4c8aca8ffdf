"""Finite modal logic over Kripke frames and finite topological spaces."""
from .errors import (BudgetExceeded, InvalidAssignment, InvalidTopology, ModalTopoError,
                     NotTransitive, ParseError, UnboundVariable)
from .formula import (AXIOM_NAMES, BOT, TOP, And, Box, BoxStar, Dia, DiaStar, Formula, Imp, Not,
                      Or, Var, named_axiom, parse, scheme_C, scheme_D, scheme_P, to_text)
from .kripke import Frame, FrameConstraints, circumference, clusters, enumerate_frames, valid_in_frame
from .topo import TopSpace, classify, make_space
from .dsem import DMorphism, TopoModel, c_valid, d_valid, validity_transfer_check
from .glue import glue, default_assignment

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "InvalidAssignment", "InvalidTopology", "ModalTopoError", "NotTransitive",
    "ParseError", "UnboundVariable",
    "AXIOM_NAMES", "BOT", "TOP", "And", "Box", "BoxStar", "Dia", "DiaStar", "Formula", "Imp",
    "Not", "Or", "Var", "named_axiom", "parse", "scheme_C", "scheme_D", "scheme_P", "to_text",
    "Frame", "FrameConstraints", "circumference", "clusters", "enumerate_frames",
    "valid_in_frame", "TopSpace", "classify", "make_space",
    "DMorphism", "TopoModel", "c_valid", "d_valid", "validity_transfer_check",
    "glue", "default_assignment",
]
