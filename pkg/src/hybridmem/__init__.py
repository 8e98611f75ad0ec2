"""Trace-driven simulator of hybrid DRAM-PCM main memories"""

__version__ = '0.1.0'
