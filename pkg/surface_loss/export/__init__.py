"""
This package will have scripts for writing results of the surface loss library to CSV, JSON, Excel and text formats.
"""
