"""lexlearn: online lexicon acquisition from phoneme sequences and sememe bags."""

from .core import (ConfigError, Dictionary, FormatError, GenerationError,
                   InputError, LearnerConfig, LexlearnError,
                   OracleCapacityError, SymbolTable, Symbols, Utterance, Word,
                   dump_dictionary, dumps_dictionary, load_dictionary,
                   make_utterance, semantic_target, word_content_tokens)
from .corpus import (GenConfig, GoldLexicon, dump_corpus, dump_gold_lexicon,
                     generate_synthetic, generate_with_trace,
                     load_corpus, load_gold_lexicon, parse_corpus_line)
from .evaluate import EvalReport, evaluate, format_report
from .hypothesize import (UnderparsedRun, create_new_words,
                          find_underparsed_runs, fix_words, propose_new_words)
from .learner import TrainStats, UtteranceResult, process_utterance, train
from .lifecycle import (add_cooled_words, cool_words, cooling_factor,
                        garbage_collect, reduce_dictionary)
from .matching import Match, match_word_at, match_words, retained
from .parsing import (ParseResult, brute_force_parse, parse, parse_error,
                      penalty_f, penalty_f_prime)

__version__ = "0.1.0"
