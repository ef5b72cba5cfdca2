"""adoptrace: aspect-based sentiment tracking of emerging-technology adoption.

A corpus of short social-media texts flows through ingestion, text
normalization, multi-pattern aspect extraction, rule-augmented lexicon
valence scoring, and per-(aspect, month) trend aggregation; an evaluation
kit and annotation service validate the automated labels against human
judgments.
"""

from .aspects import AspectMention, TermIndex, extract, load_terms
from .corpus import (IngestStats, MonthKey, TweetRecord, load_corpus,
                     parse_record, partition_by_month)
from .evalkit import (AgreementReport, AnnotationRecord, ConfusionReport,
                      GoldLabel, confusion, gold_standard, krippendorff_alpha,
                      stratified_sample)
from .textprep import CleanText, PrepConfig, normalize
from .trend import AspectMonthCell, aggregate
from .valence import (Lexicon, Polarity, ValenceConfig, ValenceScore, classify,
                      default_lexicon, load_lexicon, score)

__version__ = "0.1.0"
