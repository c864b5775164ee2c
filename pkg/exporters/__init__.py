"""数据导出模块"""
from exporters.report_exporter import (
    ReportExporter, dataset_statistics, export_dataset_statistics, format_matrix
)

__all__ = ['ReportExporter', 'dataset_statistics', 'export_dataset_statistics', 'format_matrix']
