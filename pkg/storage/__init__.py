from storage.spec_loader import DominanceInputs, SolverSettings, load_dominance, load_game
from storage.trace_writer import TraceWriter, final_frame, summary_record, trace_frame
